"""Exact rational linear algebra: dense matrices over Fraction, fraction-free
determinants, kernel (Gale dual) bases, and an exact two-phase simplex.

Everything here is exact; no floats are ever introduced.  Matrices are small
(at most a few dozen rows/columns), so dense algorithms are fine.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

Q = Fraction

__all__ = [
    "Q",
    "QMatrix",
    "LinearProgram",
    "LPOutcome",
    "LPError",
    "lp_solve",
    "solve_standard_form",
    "strict_feasibility",
    "primitive_vector",
]


class LPError(Exception):
    """Malformed linear program or internal certificate mismatch."""


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot build an exact rational from {x!r}")


class QMatrix:
    """Dense matrix over arbitrary-precision rationals.

    Rows are stored as lists of Fraction.  Instances are treated as
    immutable by convention; all operations return new matrices.
    """

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Sequence[Sequence]):
        self.rows = [[_as_fraction(x) for x in row] for row in rows]
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else 0
        for row in self.rows:
            if len(row) != self.ncols:
                raise ValueError("ragged rows")

    # -- constructors -----------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        return cls([[Q(int(i == j)) for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, nrows: int, ncols: int) -> "QMatrix":
        m = cls([[Q(0)] * ncols for _ in range(nrows)])
        m.ncols = ncols  # keep the width even with no rows
        return m

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence]) -> "QMatrix":
        return cls(cols).transpose()

    # -- basic accessors ---------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.rows[i][j]

    def row(self, i: int) -> list[Fraction]:
        return list(self.rows[i])

    def column(self, j: int) -> list[Fraction]:
        return [row[j] for row in self.rows]

    def columns(self) -> list[list[Fraction]]:
        return [self.column(j) for j in range(self.ncols)]

    def __eq__(self, other) -> bool:
        return isinstance(other, QMatrix) and self.rows == other.rows

    def __hash__(self):
        return hash(tuple(tuple(r) for r in self.rows))

    def __repr__(self) -> str:
        return f"QMatrix({self.nrows}x{self.ncols})"

    # -- algebra -----------------------------------------------------------

    def transpose(self) -> "QMatrix":
        return QMatrix([[self.rows[i][j] for i in range(self.nrows)]
                        for j in range(self.ncols)])

    def __matmul__(self, other: "QMatrix") -> "QMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        bt = other.transpose().rows
        return QMatrix([[sum(a * b for a, b in zip(row, col)) for col in bt]
                        for row in self.rows])

    def __add__(self, other: "QMatrix") -> "QMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return QMatrix([[a + b for a, b in zip(r1, r2)]
                        for r1, r2 in zip(self.rows, other.rows)])

    def __neg__(self) -> "QMatrix":
        return QMatrix([[-a for a in row] for row in self.rows])

    def scale(self, c) -> "QMatrix":
        c = _as_fraction(c)
        return QMatrix([[c * a for a in row] for row in self.rows])

    def mul_vector(self, v: Sequence) -> list[Fraction]:
        v = [_as_fraction(x) for x in v]
        if len(v) != self.ncols:
            raise ValueError("vector length mismatch")
        return [sum(a * b for a, b in zip(row, v)) for row in self.rows]

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.rows for x in row)

    def select_columns(self, cols: Iterable[int]) -> "QMatrix":
        cols = list(cols)
        if not self.rows:
            return QMatrix.zero(0, len(cols))
        return QMatrix([[row[j] for j in cols] for row in self.rows])

    def select_rows(self, idx: Iterable[int]) -> "QMatrix":
        idx = list(idx)
        if not idx:
            return QMatrix.zero(0, self.ncols)
        return QMatrix([self.rows[i] for i in idx])

    def hstack(self, other: "QMatrix") -> "QMatrix":
        if self.nrows != other.nrows:
            raise ValueError("row count mismatch")
        return QMatrix([r1 + r2 for r1, r2 in zip(self.rows, other.rows)])

    def vstack(self, other: "QMatrix") -> "QMatrix":
        if self.ncols != other.ncols:
            raise ValueError("column count mismatch")
        return QMatrix(self.rows + other.rows)

    # -- elimination-based operations ---------------------------------------

    def determinant(self) -> Fraction:
        """Exact determinant by fraction-free (Bareiss) elimination.

        Rows are first scaled to integers (tracking the scale product), then
        eliminated with the two-term Bareiss recurrence, which keeps every
        intermediate value an integer dividing a minor.
        """
        if self.nrows != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        n = self.nrows
        if n == 0:
            return Q(1)
        scale = 1
        m: list[list[int]] = []
        for row in self.rows:
            d = lcm(*(x.denominator for x in row)) if row else 1
            scale *= d
            m.append([int(x * d) for x in row])
        sign = 1
        prev = 1
        for k in range(n - 1):
            if m[k][k] == 0:
                for i in range(k + 1, n):
                    if m[i][k] != 0:
                        m[k], m[i] = m[i], m[k]
                        sign = -sign
                        break
                else:
                    return Q(0)
            pkk = m[k][k]
            for i in range(k + 1, n):
                mik = m[i][k]
                ri, rk = m[i], m[k]
                for j in range(k + 1, n):
                    ri[j] = (ri[j] * pkk - mik * rk[j]) // prev
                ri[k] = 0
            prev = pkk
        return Q(sign * m[n - 1][n - 1], scale)

    def rref(self) -> tuple["QMatrix", list[int]]:
        """Reduced row echelon form and the list of pivot columns."""
        m = [row[:] for row in self.rows]
        pivots: list[int] = []
        r = 0
        for c in range(self.ncols):
            piv = next((i for i in range(r, self.nrows) if m[i][c] != 0), None)
            if piv is None:
                continue
            m[r], m[piv] = m[piv], m[r]
            inv = 1 / m[r][c]
            m[r] = [x * inv for x in m[r]]
            for i in range(self.nrows):
                if i != r and m[i][c] != 0:
                    f = m[i][c]
                    m[i] = [x - f * y for x, y in zip(m[i], m[r])]
            pivots.append(c)
            r += 1
            if r == self.nrows:
                break
        return QMatrix(m), pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def kernel_basis(self) -> "QMatrix":
        """Basis of {x : self @ x = 0}, one basis vector per row.

        For a full-row-rank input this is a Gale dual: the result B satisfies
        self @ B.T == 0 and has full row rank cols - rank.
        """
        red, pivots = self.rref()
        free = [j for j in range(self.ncols) if j not in pivots]
        basis = []
        for f in free:
            v = [Q(0)] * self.ncols
            v[f] = Q(1)
            for r, p in enumerate(pivots):
                v[p] = -red.rows[r][f]
            basis.append(v)
        return QMatrix(basis) if basis else QMatrix.zero(0, self.ncols)

    def solve(self, b: Sequence) -> list[Fraction] | None:
        """One solution of self @ x = b, or None if inconsistent.

        For a square invertible matrix this is the unique solution.
        """
        b = [_as_fraction(x) for x in b]
        aug = QMatrix([row + [bi] for row, bi in zip(self.rows, b)])
        red, pivots = aug.rref()
        if self.ncols in pivots:
            return None
        x = [Q(0)] * self.ncols
        for r, p in enumerate(pivots):
            x[p] = red.rows[r][self.ncols]
        return x

    def inverse(self) -> "QMatrix":
        if self.nrows != self.ncols:
            raise ValueError("inverse of a non-square matrix")
        aug = self.hstack(QMatrix.identity(self.nrows))
        red, pivots = aug.rref()
        if pivots != list(range(self.nrows)):
            raise ValueError("matrix is singular")
        return red.select_columns(range(self.nrows, 2 * self.nrows))

    # -- serialization -------------------------------------------------------

    def to_json_obj(self) -> dict:
        return {
            "rows": self.nrows,
            "cols": self.ncols,
            "entries": [[str(x) for x in row] for row in self.rows],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True)

    @classmethod
    def from_json_obj(cls, obj: dict) -> "QMatrix":
        m = cls(obj["entries"]) if obj["entries"] else cls.zero(0, obj["cols"])
        if m.shape != (obj["rows"], obj["cols"]):
            raise ValueError("shape metadata disagrees with entries")
        return m

    @classmethod
    def from_json(cls, s: str) -> "QMatrix":
        return cls.from_json_obj(json.loads(s))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf)
        for row in self.rows:
            w.writerow([str(x) for x in row])
        return buf.getvalue()

    def pretty(self) -> str:
        """Aligned plain-text rendering with exact entries."""
        cells = [[str(x) for x in row] for row in self.rows]
        if not cells:
            return "( )"
        widths = [max(len(cells[i][j]) for i in range(self.nrows))
                  for j in range(self.ncols)]
        lines = []
        for row in cells:
            lines.append("( " + "  ".join(c.rjust(w) for c, w in zip(row, widths)) + " )")
        return "\n".join(lines)


def primitive_vector(v: Sequence[Fraction]) -> list[int]:
    """Scale a nonzero rational vector to coprime integers, keeping signs."""
    v = [_as_fraction(x) for x in v]
    d = lcm(*(x.denominator for x in v)) if v else 1
    ints = [int(x * d) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    if g > 1:
        ints = [x // g for x in ints]
    return ints


# ---------------------------------------------------------------------------
# Exact simplex
# ---------------------------------------------------------------------------

@dataclass
class LinearProgram:
    """max objective . x  subject to rows with senses in {"<=", "==", ">="}.

    ``free`` marks sign-unrestricted variables; all others require x >= 0.
    """

    constraints: list[list[Fraction]]
    senses: list[str]
    rhs: list[Fraction]
    objective: list[Fraction]
    free: set[int] = field(default_factory=set)

    def __post_init__(self):
        n = len(self.objective)
        if len(self.constraints) != len(self.senses) or len(self.senses) != len(self.rhs):
            raise LPError("inconsistent numbers of rows, senses and rhs values")
        for row in self.constraints:
            if len(row) != n:
                raise LPError("constraint width disagrees with objective length")
        for s in self.senses:
            if s not in ("<=", "==", ">="):
                raise LPError(f"unknown sense {s!r}")
        self.constraints = [[_as_fraction(x) for x in row] for row in self.constraints]
        self.rhs = [_as_fraction(x) for x in self.rhs]
        self.objective = [_as_fraction(x) for x in self.objective]


@dataclass
class LPOutcome:
    """Outcome of an exact LP solve; certificates re-verify exactly."""

    status: str                      # "optimal" | "infeasible" | "unbounded"
    x: list[Fraction] | None = None
    value: Fraction | None = None
    # Farkas certificate for infeasible problems: y with y.A <= 0 on every
    # column (in the standard-form sense) and y.b > 0.
    farkas: list[Fraction] | None = None
    # Unbounded direction in the original variables.
    ray: list[Fraction] | None = None


def _pivot(tab: list[list[Fraction]], r: int, c: int, basis: list[int]) -> None:
    piv = tab[r][c]
    inv = 1 / piv
    tab[r] = [x * inv for x in tab[r]]
    prow = tab[r]
    for i, row in enumerate(tab):
        if i != r and row[c] != 0:
            f = row[c]
            tab[i] = [x - f * y for x, y in zip(row, prow)]
    basis[r] = c


def _simplex_phase(tab: list[list[Fraction]], basis: list[int], ncols: int,
                   allowed: int) -> bool:
    """Minimize the objective held in the last tableau row with Bland's rule.

    ``allowed`` restricts entering columns to indices < allowed.  Returns
    False when an unbounded descent direction is detected.
    """
    obj = tab[-1]
    while True:
        enter = next((j for j in range(allowed) if obj[j] < 0), None)
        if enter is None:
            return True
        leave = None
        best = None
        for i in range(len(tab) - 1):
            a = tab[i][enter]
            if a > 0:
                ratio = tab[i][ncols] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave is None:
            return False
        _pivot(tab, leave, enter, basis)
        obj = tab[-1]


def solve_standard_form(A: QMatrix, b: Sequence, c: Sequence) -> LPOutcome:
    """min c.x  s.t.  A x = b, x >= 0, by the exact two-phase simplex.

    On success the outcome carries the optimal x; on infeasibility it carries
    a Farkas vector y with y.A <= 0 componentwise and y.b > 0.  Unbounded
    problems return a feasible point plus an improving ray.
    """
    m, n = A.shape
    b = [_as_fraction(x) for x in b]
    c = [_as_fraction(x) for x in c]
    rows = [row[:] for row in A.rows]
    sign = [1] * m
    for i in range(m):
        if b[i] < 0:
            rows[i] = [-x for x in rows[i]]
            b[i] = -b[i]
            sign[i] = -1

    # Phase 1: artificial variable a_i per row, minimize their sum.
    tab = [rows[i] + [Q(int(i == j)) for j in range(m)] + [b[i]] for i in range(m)]
    basis = [n + i for i in range(m)]
    # Reduced-cost row for cost (0,...,0,1,...,1) with the artificial basis.
    obj = [Q(0)] * n + [Q(1)] * m + [Q(0)]
    for row in tab:
        obj = [o - a for o, a in zip(obj, row)]
    tab.append(obj)
    _simplex_phase(tab, basis, n + m, allowed=n + m)
    if tab[-1][n + m] < 0:  # phase-1 optimum -rhs cell is positive
        # Phase-1 dual prices certify infeasibility; B^-1 sits under the
        # artificial columns.  Undo the row sign flips afterwards.
        y_flip = [sum(tab[i][n + j] for i in range(m) if basis[i] >= n)
                  for j in range(m)]
        y = [yj * s for yj, s in zip(y_flip, sign)]
        out = LPOutcome(status="infeasible", farkas=y)
        _check_farkas(A, [bb * s for bb, s in zip(b, sign)], y)
        return out

    # Drive artificials out of the basis where possible.
    for i in range(m):
        if basis[i] >= n:
            piv = next((j for j in range(n) if tab[i][j] != 0), None)
            if piv is not None:
                _pivot(tab, i, piv, basis)

    # Phase 2 on the rows whose basis variable is structural.
    keep = [i for i in range(m) if basis[i] < n]
    tab2 = [tab[i][:n] + [tab[i][n + m]] for i in keep]
    basis2 = [basis[i] for i in keep]
    obj2 = c[:] + [Q(0)]
    for i, bi in enumerate(basis2):
        if obj2[bi] != 0:
            f = obj2[bi]
            obj2 = [x - f * y for x, y in zip(obj2, tab2[i])]
    tab2.append(obj2)
    ok = _simplex_phase(tab2, basis2, n, allowed=n)
    x = [Q(0)] * n
    for i, bi in enumerate(basis2):
        x[bi] = tab2[i][n]
    if not ok:
        enter = next(j for j in range(n) if tab2[-1][j] < 0)
        ray = [Q(0)] * n
        ray[enter] = Q(1)
        for i, bi in enumerate(basis2):
            ray[bi] = -tab2[i][enter]
        return LPOutcome(status="unbounded", x=x, ray=ray)
    value = sum(ci * xi for ci, xi in zip(c, x))
    return LPOutcome(status="optimal", x=x, value=value)


def _check_farkas(A: QMatrix, b: list[Fraction], y: list[Fraction]) -> None:
    yb = sum(yi * bi for yi, bi in zip(y, b))
    if yb <= 0:
        raise LPError("internal error: Farkas certificate has y.b <= 0")
    At = A.transpose()
    for j in range(A.ncols):
        if sum(yi * aij for yi, aij in zip(y, At.rows[j])) > 0:
            raise LPError("internal error: Farkas certificate fails on a column")


def lp_solve(p: LinearProgram) -> LPOutcome:
    """Solve a general-form LP exactly (maximization, mixed senses)."""
    n = len(p.objective)
    # Variable map: free variables split into a difference of nonnegatives.
    cols: list[tuple[int, int]] = []  # (original index, sign)
    for j in range(n):
        cols.append((j, 1))
        if j in p.free:
            cols.append((j, -1))
    rows = []
    rhs = []
    nslack = sum(1 for s in p.senses if s != "==")
    k = 0
    for row, sense, bb in zip(p.constraints, p.senses, p.rhs):
        r = [s * row[j] for j, s in cols]
        slack = [Q(0)] * nslack
        if sense != "==":
            slack[k] = Q(1) if sense == "<=" else Q(-1)
            k += 1
        rows.append(r + slack)
        rhs.append(bb)
    c_std = [-p.objective[j] * s for j, s in cols] + [Q(0)] * nslack
    out = solve_standard_form(QMatrix(rows), rhs, c_std)
    if out.status == "infeasible":
        return out

    def back(vec: list[Fraction]) -> list[Fraction]:
        x = [Q(0)] * n
        for t, (j, s) in enumerate(cols):
            x[j] += s * vec[t]
        return x

    res = LPOutcome(status=out.status, x=back(out.x))
    if out.status == "optimal":
        res.value = -out.value
    if out.ray is not None:
        res.ray = back(out.ray)
    return res


def strict_feasibility(rows: Sequence[Sequence]) -> tuple[bool, list[Fraction]]:
    """Decide whether the homogeneous strict system  <a_i, h> > 0  is solvable.

    Equivalent to  max eps  s.t.  <a_i, h> >= eps, eps <= 1: the system is
    solvable iff the optimum is positive (then 1, by rescaling).  Returns
    ``(True, h)`` with an exact interior point satisfying every row >= 1, or
    ``(False, y)`` with a Gordan/Farkas witness: y >= 0, y != 0 and
    sum_i y_i a_i = 0, scaled to coprime integers.
    """
    rows = [[_as_fraction(x) for x in row] for row in rows]
    if not rows:
        return True, []
    d = len(rows[0])
    # Gordan alternative as a standard-form feasibility problem:
    #   find y >= 0 with  A^t y = 0  and  1.y = 1.
    At = [[row[j] for row in rows] for j in range(d)]
    At.append([Q(1)] * len(rows))
    b = [Q(0)] * d + [Q(1)]
    out = solve_standard_form(QMatrix(At), b, [Q(0)] * len(rows))
    if out.status == "optimal":
        witness = [Q(x) for x in primitive_vector(out.x)]
        return False, witness
    # Infeasible: the Farkas vector u has u.A^t <= 0 and u_last > 0, so
    # h = -u[:d] / u_last satisfies every <a_i, h> >= 1.
    u = out.farkas
    t = u[d]
    h = [-u[j] / t for j in range(d)]
    for row in rows:
        if sum(a * x for a, x in zip(row, h)) < 1:
            raise LPError("internal error: interior point fails a row")
    return True, h
