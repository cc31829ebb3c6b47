"""Exact matrix operations and the simplex, cross-checked against
independent brute-force oracles."""

import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from subword_fans.linalg import (
    LinearProgram,
    LPError,
    QMatrix,
    lp_solve,
    primitive_vector,
    solve_standard_form,
    strict_feasibility,
)


def cofactor_det(rows):
    """Independent determinant oracle by Laplace expansion."""
    n = len(rows)
    if n == 1:
        return rows[0][0]
    total = Fraction(0)
    for j in range(n):
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        total += (-1) ** j * rows[0][j] * cofactor_det(minor)
    return total


def random_matrix(rng, nrows, ncols, den=4):
    return QMatrix([[Fraction(rng.randint(-6, 6), rng.randint(1, den))
                     for _ in range(ncols)] for _ in range(nrows)])


def test_determinant_basics():
    assert QMatrix([[1, 0], [0, 1]]).determinant() == 1
    assert QMatrix([[0, 1], [1, 0]]).determinant() == -1
    with pytest.raises(ValueError):
        QMatrix([[1, 2]]).determinant()


def test_determinant_against_cofactor_oracle():
    rng = random.Random(1)
    for _ in range(120):
        n = rng.randint(1, 5)
        m = random_matrix(rng, n, n)
        assert m.determinant() == cofactor_det(m.rows)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.integers(0, 10 ** 6))
def test_determinant_multiplicative_and_transpose(n, seed):
    rng = random.Random(seed)
    a = random_matrix(rng, n, n)
    b = random_matrix(rng, n, n)
    assert (a @ b).determinant() == a.determinant() * b.determinant()
    assert a.determinant() == a.transpose().determinant()


def test_kernel_basis_shapes_and_orthogonality():
    k = QMatrix([[1, 1]]).kernel_basis()
    assert k.shape == (1, 2) and k.rows[0][0] + k.rows[0][1] == 0
    assert QMatrix.identity(3).kernel_basis().shape == (0, 3)
    rng = random.Random(2)
    for _ in range(60):
        m = random_matrix(rng, rng.randint(1, 4), rng.randint(1, 6))
        k = m.kernel_basis()
        assert k.nrows == m.ncols - m.rank()
        if k.nrows:
            assert (m @ k.transpose()).is_zero()
            assert k.rank() == k.nrows


def test_solve_and_inverse():
    rng = random.Random(3)
    for _ in range(40):
        n = rng.randint(1, 5)
        m = random_matrix(rng, n, n)
        if m.determinant() == 0:
            continue
        x = [Fraction(rng.randint(-5, 5)) for _ in range(n)]
        b = m.mul_vector(x)
        assert m.solve(b) == x
        assert (m @ m.inverse()) == QMatrix.identity(n)
    assert QMatrix([[1, 1], [1, 1]]).solve([1, 2]) is None


def test_matrix_json_csv_round_trip():
    m = QMatrix([["1/2", "-3"], ["0", "7/5"]])
    assert QMatrix.from_json(m.to_json()) == m
    assert "1/2,-3" in m.to_csv()
    assert "7/5" in m.pretty()


def brute_force_standard(A, b, c):
    """LP oracle: reduce to independent rows, enumerate basic solutions."""
    m, n = A.shape
    aug = A.hstack(QMatrix([[x] for x in b]))
    red, pivots = aug.rref()
    if n in pivots:
        return False, None
    rows_needed = len(pivots)
    if rows_needed == 0:
        return True, Fraction(0) if all(ci >= 0 for ci in c) else None
    A2 = QMatrix(red.rows[:rows_needed]).select_columns(range(n))
    b2 = [red.rows[i][n] for i in range(rows_needed)]
    best = None
    feasible = False
    for cols in itertools.combinations(range(n), rows_needed):
        sub = A2.select_columns(cols)
        if sub.determinant() == 0:
            continue
        xb = sub.solve(b2)
        if xb is None or any(v < 0 for v in xb):
            continue
        x = [Fraction(0)] * n
        for j, col in enumerate(cols):
            x[col] = xb[j]
        feasible = True
        val = sum(ci * xi for ci, xi in zip(c, x))
        if best is None or val < best:
            best = val
    return feasible, best


def test_simplex_against_vertex_enumeration():
    rng = random.Random(42)
    statuses = {"optimal": 0, "infeasible": 0, "unbounded": 0}
    for _ in range(250):
        m = rng.randint(1, 3)
        n = rng.randint(1, 5)
        A = QMatrix([[Fraction(rng.randint(-3, 3)) for _ in range(n)]
                     for _ in range(m)])
        b = [Fraction(rng.randint(-3, 3)) for _ in range(m)]
        c = [Fraction(rng.randint(-3, 3)) for _ in range(n)]
        out = solve_standard_form(A, b, c)
        feasible, best = brute_force_standard(A, b, c)
        statuses[out.status] += 1
        if out.status == "infeasible":
            assert not feasible
            # the Farkas certificate is re-verified inside the solver
            assert out.farkas is not None
        elif out.status == "optimal":
            assert feasible and out.value == best
            assert A.mul_vector(out.x) == b
            assert all(x >= 0 for x in out.x)
        else:
            assert feasible
            assert A.mul_vector(out.ray) == [Fraction(0)] * m
            assert all(r >= 0 for r in out.ray)
            assert sum(ci * ri for ci, ri in zip(c, out.ray)) < 0
    assert all(statuses.values()), statuses


def test_lp_solve_examples():
    out = lp_solve(LinearProgram([[1]], ["<="], [1], [1]))
    assert out.status == "optimal" and out.x == [1] and out.value == 1
    out = lp_solve(LinearProgram([[1], [1]], [">=", "<="], [1, 0], [0]))
    assert out.status == "infeasible"
    out = lp_solve(LinearProgram([[1]], [">="], [0], [1]))
    assert out.status == "unbounded"
    # free variable: max -y s.t. y >= -3, y free
    out = lp_solve(LinearProgram([[1]], [">="], [-3], [-1], free={0}))
    assert out.status == "optimal" and out.x == [-3]


def test_lp_malformed():
    with pytest.raises(LPError):
        LinearProgram([[1, 2]], ["<="], [1], [1])
    with pytest.raises(LPError):
        LinearProgram([[1]], ["<"], [1], [1])


def test_strict_feasibility_examples():
    ok, w = strict_feasibility([[1], [-1]])
    assert not ok and w == [1, 1]
    ok, h = strict_feasibility([[1]])
    assert ok and h[0] >= 1
    ok, h = strict_feasibility([[1, 1]])
    assert ok and h[0] + h[1] >= 1
    ok, h = strict_feasibility([])
    assert ok


def test_strict_feasibility_random_certificates():
    rng = random.Random(5)
    for _ in range(120):
        d = rng.randint(1, 4)
        rows = [[Fraction(rng.randint(-4, 4)) for _ in range(d)]
                for _ in range(rng.randint(1, 6))]
        ok, cert = strict_feasibility(rows)
        if ok:
            for row in rows:
                assert sum(a * x for a, x in zip(row, cert)) >= 1
        else:
            assert any(x != 0 for x in cert)
            assert all(x >= 0 for x in cert)
            combo = [sum(cert[i] * rows[i][j] for i in range(len(rows)))
                     for j in range(d)]
            assert all(x == 0 for x in combo)


def test_primitive_vector():
    assert primitive_vector([Fraction(1, 2), Fraction(-3, 4)]) == [2, -3]
    assert primitive_vector([Fraction(4), Fraction(6)]) == [2, 3]
