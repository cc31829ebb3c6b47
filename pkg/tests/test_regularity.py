"""Regularity verdicts, certificates, and the embedding survey."""

import copy
import csv
import random
from fractions import Fraction

import pytest

from subword_fans.complexes import SubwordComplex, multiassoc_word
from subword_fans.counting import (
    counting_matrix,
    enumerate_embeddings,
    restricted_matrix,
)
from subword_fans.fan import build_fan, builtin_fan, check_complete
from subword_fans.linalg import QMatrix
from subword_fans.regularity import (
    check_regular,
    survey,
    survey_instance,
    survey_obs_deletions,
    verify_certificate,
)


def pentagon_fan():
    word = multiassoc_word(2, 1, (1, 2))
    emb = next(iter(enumerate_embeddings(word, (1, 2) * 3)))
    D = restricted_matrix(counting_matrix(2, (1, 2), 3), emb)
    return build_fan(SubwordComplex(2, word), D.kernel_basis()), D


def test_pentagon_regular_with_heights():
    fan, D = pentagon_fan()
    result = check_regular(fan, D)
    assert result.regular
    assert verify_certificate(fan, result)
    # gauge: heights vanish on the reference facet, walls strictly positive
    assert all(result.heights[p] == 0 for p in result.reference_facet)
    for wall in result.walls:
        assert sum(c * result.heights[p] for p, c in wall.coeffs.items()) > 0


def test_simplex_boundary_fan_regular():
    # the rank-1 fan is the boundary of a simplex, always polytopal
    fan = builtin_fan("M_1", 4)
    D = counting_matrix(1, (1,), 4)
    result = check_regular(fan, D)
    assert result.regular and verify_certificate(fan, result)


def test_delta_10_3_non_regular():
    fan = builtin_fan("M_213", 5)
    D = counting_matrix(3, (2, 1, 3), 5)
    result = check_regular(fan, D)
    assert result.verdict == "non_regular"
    assert result.wall_count == 1485
    assert result.farkas and verify_certificate(fan, result)
    # the Gordan combination really is a nonnegative dependence of wall rows
    total = {}
    for idx, weight in result.farkas:
        assert weight > 0
        for p, c in result.walls[idx].coeffs.items():
            total[p] = total.get(p, Fraction(0)) + weight * c
    assert all(v == 0 for v in total.values())


def test_tampered_certificates_rejected():
    fan, D = pentagon_fan()
    result = check_regular(fan, D)
    bad = copy.deepcopy(result)
    nz = next(i for i, h in enumerate(bad.heights) if h != 0)
    bad.heights[nz] = Fraction(0)
    assert not verify_certificate(fan, bad)

    fan10 = builtin_fan("M_213", 5)
    D10 = counting_matrix(3, (2, 1, 3), 5)
    res10 = check_regular(fan10, D10)
    bad10 = copy.deepcopy(res10)
    idx, w = bad10.farkas[0]
    bad10.farkas[0] = (idx, w + 1)
    assert not verify_certificate(fan10, bad10)


def test_check_regular_requires_complete():
    fan, D = pentagon_fan()
    rays = [row[:] for row in fan.rays.rows]
    for t in range(len(rays)):
        rays[t][1] = rays[t][0]
    degenerate = build_fan(fan.complex, QMatrix(rays))
    with pytest.raises(ValueError):
        check_regular(degenerate, QMatrix(rays).kernel_basis())
    with pytest.raises(ValueError):
        check_regular(fan)  # neither D nor a completeness report


def test_verdicts_invariant_under_positive_scaling_and_row_ops():
    fan, D = pentagon_fan()
    rng = random.Random(4)
    # positive rescaling of rays; the Gale dual columns scale inversely
    scales = [Fraction(rng.randint(1, 5), rng.randint(1, 5)) for _ in range(fan.rays.ncols)]
    scaled = QMatrix([[row[j] * scales[j] for j in range(fan.rays.ncols)]
                      for row in fan.rays.rows])
    D_scaled = QMatrix([[row[j] / scales[j] for j in range(D.ncols)]
                        for row in D.rows])
    fan_scaled = build_fan(fan.complex, scaled)
    assert check_regular(fan_scaled, D_scaled).regular
    # invertible row operations on the ray matrix (a different basis of the
    # same kernel; same Gale dual)
    U = QMatrix([[1, 1], [0, 1]])
    fan_rowop = build_fan(fan.complex, U @ fan.rays)
    assert check_regular(fan_rowop, D).regular
    # a mirrored Gale dual (row basis with negative determinant) flips the
    # sign tally but must not change the verdicts
    V = QMatrix.identity(3).rows
    V[0], V[1] = V[1], V[0]
    D_mirror = QMatrix(V) @ D
    report = check_complete(fan, D_mirror)
    assert report.complete and report.orientation == -1
    assert check_regular(fan, completeness=report).regular

    fan10 = builtin_fan("M_213", 5)
    D10 = counting_matrix(3, (2, 1, 3), 5)
    U = QMatrix.identity(9).rows
    U[0] = [Fraction(2)] + U[0][1:]
    U[3] = [Fraction(1)] + U[3][1:]
    fan10b = build_fan(fan10.complex, QMatrix(U) @ fan10.rays)
    assert check_regular(fan10b, D10).verdict == "non_regular"


def test_survey_instance_row():
    word = multiassoc_word(2, 1, (1, 2))
    emb = next(iter(enumerate_embeddings(word, (1, 2) * 3)))
    row = survey_instance(2, (1, 2), word, 3, emb)
    assert row.complete and row.regular
    assert row.wall_count == 5
    assert row.key().startswith("12121|3|")


def test_survey_runs_and_resumes(tmp_path):
    out = tmp_path / "survey.csv"
    tally1 = survey(2, 1, (1, 2), 4, out_csv=str(out), limit=4)
    assert tally1["rows"] == 4
    assert tally1["regular"] == 4 and tally1["non_regular"] == 0
    with open(out) as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 4
    assert rows[0]["complete"] == "1"
    # resume: previously recorded instances are skipped
    tally2 = survey(2, 1, (1, 2), 4, out_csv=str(out), limit=4)
    with open(out) as fh:
        rows2 = list(csv.DictReader(fh))
    keys = [(r["word"], r["m"], r["embedding"]) for r in rows2]
    assert len(keys) == len(set(keys))
    assert len(rows2) >= len(rows)


def test_survey_a2_all_regular(tmp_path):
    # rank-2 fans are regular in every tested instance
    tally = survey(2, 2, (1, 2), 4, out_csv=None, limit=20)
    assert tally["non_regular"] == 0 and tally["incomplete"] == 0
    assert tally["regular"] == tally["rows"] > 0


def test_survey_delta_10_3_all_non_regular():
    tally = survey(3, 3, (2, 1, 3), 6, out_csv=None, limit=2, max_words=1)
    assert tally["regular"] == 0 and tally["incomplete"] == 0
    assert tally["non_regular"] == tally["rows"] == 2


def test_obs_deletions_survey():
    # observational: regularity of the deletions depends on the embedding,
    # so the survey logs statuses rather than asserting them all regular
    rows = survey_obs_deletions(m=5, c=(1, 2, 3), embeddings_per_word=1)
    assert len(rows) == 10
    statuses = [s for _, s in rows]
    # deleting the unique letter 3 kills every reduced expression
    assert statuses.count("not_spherical") == 1
    assert statuses.count("regular") >= 7
    assert all(s in ("regular", "non_regular", "not_spherical") for s in statuses)
