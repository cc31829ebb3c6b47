"""Acceptance suite: every criterion exactly, one pass/fail line each.

All tolerances are exact equality (the arithmetic is rational throughout).
Run with ``pytest tests/test_acceptance.py -v`` (add ``-s`` to stream the
per-criterion lines).  The slowest items are the 22-ray fan checks
(minutes); everything else runs in seconds.
"""

import random
from fractions import Fraction
from itertools import permutations

import pytest

from subword_fans import coxeter as cx
from subword_fans.complexes import (
    SubwordComplex,
    example_71,
    multiassoc,
    multiassoc_word,
    obs_a3,
    obs_a3_vertex_bijection,
)
from subword_fans.counting import (
    TABLE_EXPRESSIONS,
    ParamSet,
    a4_builtin_matrices,
    check_signature_inequalities,
    closed_form_counting,
    columns_for_copies,
    counting_matrix,
    counting_matrix_for_word,
    param_counting,
    random_valid_copy_tuple,
    restricted_matrix,
    signature_report,
    table_formula,
)
from subword_fans.fan import (
    ConeMembership,
    build_fan,
    builtin_fan,
    builtin_rays,
    check_complete,
    fold_to_b2,
)
from subword_fans.linalg import QMatrix
from subword_fans.regularity import check_regular, survey, verify_certificate


def report(number: int, description: str, ok: bool) -> None:
    print(f"ACCEPTANCE {number:02d} {'PASS' if ok else 'FAIL'}: {description}")
    assert ok, f"criterion {number} failed: {description}"


C4 = (2, 4, 1, 3)


@pytest.fixture(scope="module")
def a4_fans():
    """The two built-in 22/18-ray fans with verified completeness reports."""
    b = a4_builtin_matrices()
    out = {}
    for k, rays, sig in [(2, b.rays_9_2, b.signature_9_2),
                         (3, b.rays_11_3, b.signature_11_3)]:
        word = multiassoc_word(4, k, C4)
        fan = build_fan(SubwordComplex(4, word), rays.transpose())
        out[k] = (fan, sig, check_complete(fan, sig))
    return out


def test_criterion_01_f_vectors_exact():
    K103, _ = multiassoc(3, 3, (2, 1, 3))
    ok1 = K103.f_vector() == (1, 15, 105, 455, 1320, 2607, 3465, 2970, 1485, 330)
    K92 = SubwordComplex(4, multiassoc_word(4, 2, C4))
    ok2 = K92.f_vector() == (1, 18, 153, 732, 2115, 3762, 4026, 2376, 594)
    K113 = SubwordComplex(4, multiassoc_word(4, 3, C4))
    ok3 = K113.f_vector() == (1, 22, 231, 1540, 7150, 23958, 58751, 105534,
                              137280, 125840, 77077, 28314, 4719)
    report(1, "f-vectors of the 10_3, 9_2 and 11_3 multi-associahedra exact",
           ok1 and ok2 and ok3)


def test_criterion_02_counting_matrices_exact():
    ok = counting_matrix(2, (1, 2), 3) == QMatrix([[1, 0, 1, 0, 1, 0],
                                                   [3, 1, 2, 2, 1, 3],
                                                   [0, 1, 0, 1, 0, 1]])
    ok &= restricted_matrix(counting_matrix(2, (1, 2), 4), [0, 1, 3, 4, 6]) == \
        QMatrix([[1, 0, 0, 1, 1], [4, 1, 2, 2, 1], [0, 1, 1, 0, 0]])
    for c in [(1,), (1, 2), (2, 1, 3), (1, 2, 3)]:
        for m in range(1, 9):
            ok &= closed_form_counting(c, m) == counting_matrix(len(c), c, m)
    report(2, "counting matrices match the printed displays and closed forms "
              "entrywise for m <= 8", ok)


def test_criterion_03_signature_property_ranks_1_to_3():
    from subword_fans.counting import _greedy_w0_positions

    ok = True
    for n in (1, 2, 3):
        for c in permutations(range(1, n + 1)):
            # smallest power whose word contains a reduced expression of w0
            m_min = _greedy_w0_positions(n, tuple(c))[-1] // n + 1
            for m in range(m_min, 7):
                rep = signature_report(counting_matrix(n, c, m),
                                       SubwordComplex(n, tuple(c) * m))
                ok &= rep.bad == 0 and rep.zero == 0
    report(3, "counting matrices are signature matrices for every Coxeter "
              "element word of ranks 1..3, m <= 6 (0 bad, 0 zero)", ok)


def test_criterion_04_determinant_tables():
    rng = random.Random(20260810)
    ok = True
    m = 9
    for c in [(2, 1, 3), (1, 2, 3)]:
        D = counting_matrix(3, c, m)
        for expr in TABLE_EXPRESSIONS:
            for _ in range(200):
                tup = random_valid_copy_tuple(rng, c, expr, m)
                cols = columns_for_copies(c, expr, tup, m)
                det = D.select_columns(cols).determinant()
                ok &= det == table_formula(c, expr, tup)
    report(4, "closed-form determinants match direct computation on 200 "
              "random valid tuples per reduced expression, both tables", ok)


@pytest.mark.parametrize("k,expected", [
    (1, (42, 0, 0, 42)),
    (2, (593, 0, 1, 594)),
    (3, (4702, 0, 17, 4719)),
    (4, (25905, 6, 115, 26026)),
])
def test_criterion_05_rank4_sign_table(k, expected):
    word = multiassoc_word(4, k, C4)
    D = counting_matrix_for_word(4, C4, word)
    rep = signature_report(D, SubwordComplex(4, word))
    got = (rep.good, rep.bad, rep.zero, rep.total)
    report(5, f"rank-4 sign tally row k={k}: {got}", got == expected)


def test_criterion_06_completeness_and_covering():
    ok = True
    fans = []
    for fam, n, c in [("M_213", 3, (2, 1, 3)), ("M_123", 3, (1, 2, 3))]:
        for m in (3, 4, 5):
            fans.append((fam, m, builtin_fan(fam, m), counting_matrix(n, c, m)))
    for m in (3, 4, 5, 6):
        fan = builtin_fan("M_12", m)
        fans.append(("M_12", m, fan, fan.rays.kernel_basis()))
    for fam, m, fan, D in fans:
        rep = check_complete(fan, D)
        ok &= rep.complete
        tester = ConeMembership(fan)
        rng = random.Random(100 * m + hash(fam) % 97)
        covers = {tester.sample_generic_point(rng)[1] for _ in range(100)}
        ok &= covers == {1}
    report(6, "fans of the printed families are complete, with covering "
              "number 1 at 100 generic points each", ok)


def test_criterion_07_non_regularity_certificates(a4_fans):
    fan10 = builtin_fan("M_213", 5)
    D10 = counting_matrix(3, (2, 1, 3), 5)
    res10 = check_regular(fan10, D10)
    ok = res10.verdict == "non_regular" and verify_certificate(fan10, res10)
    for k in (2, 3):
        fan, sig, completeness = a4_fans[k]
        ok &= completeness.complete
        res = check_regular(fan, completeness=completeness)
        ok &= res.verdict == "non_regular" and verify_certificate(fan, res)
    report(7, "the 10_3 fan and both rank-4 fans are non-regular with "
              "machine-verified Farkas certificates", ok)


def test_criterion_08_survey_consistency():
    # rank 2: every tested fan regular
    t_a2 = survey(2, 2, (1, 2), 5, out_csv=None, limit=25)
    ok = t_a2["rows"] > 0 and t_a2["regular"] == t_a2["rows"]
    # 10_3: every tested fan non-regular
    t_103 = survey(3, 3, (2, 1, 3), 6, out_csv=None, limit=3, max_words=1)
    ok &= t_103["rows"] > 0 and t_103["non_regular"] == t_103["rows"]
    # 6_1: at least one regular fan for m <= 5
    t_61 = survey(3, 1, (2, 1, 3), 5, out_csv=None, limit=8)
    ok &= t_61["regular"] >= 1
    print(f"    survey tallies: A2 {t_a2}, 10_3 {t_103}, 6_1 {t_61}")
    report(8, "surveyed rank-2 fans all regular; 10_3 fans all non-regular; "
              "a regular 6_1 fan exists for m <= 5", ok)


def test_criterion_09_bipartiteness_suite():
    g3 = cx.braid_graph(3, cx.longest_element(3))
    ok = len(g3.vertices) == 16
    for n in (2, 3, 4):
        g = cx.braid_graph(n, cx.longest_element(n))
        odd, even = cx.stabled_classes(n)
        # keeping every class leaves the graph uncontracted: G(w0) bipartite;
        # keeping one class gives the even/odd contractions
        for Z in (set(odd | even), set(odd), set(even)):
            ok &= cx.contracted_bipartite(g, Z)[0]
        for total, evens, odds in cx.cycle_basis_parities(g):
            ok &= total % 2 == 0 and evens % 2 == 0 and odds % 2 == 0
    g14 = cx.braid_graph(4, cx.evaluate(4, (1, 2, 1, 4)))
    bip, cycle = cx.contracted_bipartite(g14, {(1, 4)})
    ok &= not bip and cycle is not None and len(cycle) == 3
    report(9, "mega-bipartiteness, cycle parities, and the non-stabled "
              "{1,4} odd cycle with exactly 3 such edges", ok)


def test_criterion_10_obstruction_complex():
    obs = obs_a3()
    ok = obs.f_vector() == (1, 9, 30, 42, 21)
    ex = example_71()
    bij = obs_a3_vertex_bijection()
    mapped = sorted(tuple(sorted(bij[p] for p in F)) for F in obs.facets())
    ok &= mapped == sorted(ex.facets)
    report(10, "obstruction complex f-vector and facet-identity with the "
               "square*pentagon construction", ok)


def test_criterion_11_realization_space():
    rng = random.Random(11)
    ok = True
    accepted = 0
    while accepted < 100:
        m = rng.choice([3, 4, 5])
        c = rng.choice([(1, 2, 3), (2, 1, 3)])
        perturb = lambda: tuple(Fraction(i) + Fraction(rng.randint(-1, 1),
                                                       rng.choice([5, 7, 9, 11]))
                                for i in range(1, m + 1))
        params = ParamSet(m, perturb(), perturb(), perturb())
        sat, _ = check_signature_inequalities(c, params)
        if not sat:
            continue
        accepted += 1
        rep = signature_report(param_counting(c, params),
                               SubwordComplex(3, tuple(c) * m))
        ok &= rep.bad == 0 and rep.zero == 0
    # the printed counterexample parameters: linear system fails, while the
    # determinant signs never go wrong (one boundary zero)
    fig6 = ParamSet(3, a=(2, 0, 1), b=(2, 0, 3), c=(2, 1, 0))
    sat, violated = check_signature_inequalities((1, 2, 3), fig6)
    ok &= not sat and bool(violated)
    rep = signature_report(param_counting((1, 2, 3), fig6),
                           SubwordComplex(3, (1, 2, 3) * 3))
    ok &= rep.bad == 0
    report(11, "100 parameter sets satisfying the linear system give "
               "signature matrices (m <= 5); the counterexample parameters "
               "fail the linear system with no bad determinant signs", ok)


def test_criterion_12_folding():
    ok = all(fold_to_b2(m) == builtin_rays("M_12", m) for m in range(3, 9))
    report(12, "folded rank-2 ray matrices equal the closed form exactly "
               "for m <= 8", ok)
