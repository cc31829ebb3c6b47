"""Fans attached to subword complexes: ray-matrix builders, the
completeness checks (signature + injectivity), Gale normalization, link
restriction, wall relations, and the rank-2 folding.

A fan pairs a subword complex with a ray matrix whose columns are the rays,
one per position of the word; cones are spanned by the columns at faces.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import coxeter
from .complexes import SubwordComplex
from .counting import SignatureReport, signature_report
from .linalg import Q, QMatrix, solve_standard_form

__all__ = [
    "Fan",
    "FanCheckReport",
    "Wall",
    "build_fan",
    "builtin_rays",
    "builtin_fan",
    "fold_block",
    "fold_to_b2",
    "check_complete",
    "ConeMembership",
    "covering_number",
    "sample_generic_point",
    "DegeneratePointError",
    "gale_normalize",
    "restrict_to_link",
    "wall_relations",
    "negative_orthant_facet",
]


def _S(i: int) -> int:
    return i * i


def _T(i: int) -> Fraction:
    return Fraction(i * (i + 1), 2)


@dataclass(frozen=True)
class Fan:
    """Ray matrix (columns = rays) together with the indexing complex."""

    complex: SubwordComplex
    rays: QMatrix

    def __post_init__(self):
        if self.rays.ncols != self.complex.size:
            raise ValueError(
                f"ray matrix has {self.rays.ncols} columns for a word of "
                f"length {self.complex.size}")

    @property
    def dim(self) -> int:
        return self.rays.nrows

    def ray(self, position: int) -> list[Fraction]:
        return self.rays.column(position)

    def facet_matrix(self, facet: Sequence[int]) -> QMatrix:
        return self.rays.select_columns(facet)

    def to_json(self) -> str:
        return json.dumps({
            "rays": [[str(x) for x in self.rays.column(j)]
                     for j in range(self.rays.ncols)],
            "facets": [[p + 1 for p in F] for F in self.complex.facets()],
        }, sort_keys=True)


def build_fan(complex_: SubwordComplex, rays: QMatrix) -> Fan:
    """Fan value from a word's complex and a (r - N) x r ray matrix."""
    d = complex_.size - complex_.system.longest_length
    if rays.shape != (d, complex_.size):
        raise ValueError(f"expected ray matrix of shape {(d, complex_.size)}, "
                         f"got {rays.shape}")
    return Fan(complex_, rays)


# ---------------------------------------------------------------------------
# Built-in ray matrices
# ---------------------------------------------------------------------------

def _block_213(i: int) -> list[list[Fraction]]:
    return [
        [Q(_S(i + 1)), -_T(i), -_T(i)],
        [2 * _T(i), -_T(i - 1) + 1, -_T(i)],
        [2 * _T(i), -_T(i), -_T(i - 1) + 1],
        [Q(-_S(i + 1) + 1), _T(i), _T(i)],
        [-2 * _T(i), _T(i - 1), _T(i)],
        [-2 * _T(i), _T(i), _T(i - 1)],
    ]


def _block_123(i: int) -> list[list[Fraction]]:
    rows = [
        [_T(i), -2 * _T(i), _T(i)],
        [_T(i + 1), -2 * _T(i), _T(i - 1)],
        [_T(i), Q(-_S(i) + 1), _T(i - 1)],
        [-_T(i), 2 * _T(i), -_T(i) + 1],
        [-_T(i + 1) + 1, 2 * _T(i), -_T(i - 1)],
        [-_T(i), Q(_S(i)), -_T(i - 1)],
    ]
    if i == 1:  # the printed exception for the last column of the block
        star = [Q(0), Q(1), Q(1), Q(1), Q(-1), Q(-1)]
        for r, v in zip(rows, star):
            r[2] = v
    return rows


def fold_block(i: int) -> QMatrix:
    """Fold one bipartite rank-3 block to rank 2: merge the symmetric row
    pairs (2,3) and (5,6), then drop the repeated last column."""
    b = _block_213(i)
    merged = [
        b[0],
        [x + y for x, y in zip(b[1], b[2])],
        b[3],
        [x + y for x, y in zip(b[4], b[5])],
    ]
    for row in merged:
        if row[1] != row[2]:
            raise RuntimeError("folding failed: last two columns disagree")
    return QMatrix([row[:2] for row in merged])


def _block_12(i: int) -> list[list[Fraction]]:
    return [
        [Q(_S(i + 1)), -_T(i)],
        [4 * _T(i), Q(-_S(i) + 1)],
        [Q(-_S(i + 1) + 1), _T(i)],
        [-4 * _T(i), Q(_S(i))],
    ]


def _strip_columns(blocks: list[list[list[Fraction]]]) -> QMatrix:
    """Stack blocks side by side (highest index first) into the strip whose
    rows are the non-basis ray coordinates."""
    nrows = len(blocks[0])
    rows = [sum((blk[t] for blk in blocks), []) for t in range(nrows)]
    return QMatrix(rows)


def builtin_rays(family: str, m: int) -> QMatrix:
    """Exact printed ray matrices, columns as rays.

    Families: "M_213" and "M_123" (rank 3, m >= 3), "M_12" (folded rank 2,
    m >= 3), "M_1" (rank 1, m >= 2), "M_12_A2" (rank 2, m >= 2).
    """
    if family == "M_213":
        if m < 3:
            raise ValueError("M_213 requires m >= 3")
        d = 3 * m - 6
        strip = _strip_columns([_block_213(i) for i in range(m - 2, 0, -1)])
        return QMatrix.identity(d).scale(-1).hstack(strip.transpose())
    if family == "M_123":
        if m < 3:
            raise ValueError("M_123 requires m >= 3")
        d = 3 * m - 6
        strip = _strip_columns([_block_123(i) for i in range(m - 2, 0, -1)])
        cols: list[list[Fraction]] = []
        for p in range(d - 1):
            e = [Q(0)] * d
            e[p] = Q(-1)
            cols.append(e)
        for t in range(6):
            cols.append(strip.rows[t])
        last = [Q(0)] * d
        last[d - 1] = Q(-1)
        cols.append(last)
        return QMatrix.from_columns(cols)
    if family == "M_12":
        if m < 3:
            raise ValueError("M_12 requires m >= 3")
        d = 2 * m - 4
        strip = _strip_columns([_block_12(i) for i in range(m - 2, 0, -1)])
        return QMatrix.identity(d).scale(-1).hstack(strip.transpose())
    if family == "M_1":
        if m < 2:
            raise ValueError("M_1 requires m >= 2")
        ones = QMatrix([[Q(1)] for _ in range(m - 1)])
        return QMatrix.identity(m - 1).scale(-1).hstack(ones)
    if family == "M_12_A2":
        if m < 2:
            raise ValueError("M_12_A2 requires m >= 2")
        d = 2 * m - 3
        strip_rows = []
        for i in range(1, m - 1):
            strip_rows.append([Q(-m + i), Q(1), Q(m - i)])
            strip_rows.append([Q(m - i), Q(0), Q(-m + i + 1)])
        strip_rows.append([Q(-1), Q(1), Q(1)])
        return QMatrix.identity(d).scale(-1).hstack(QMatrix(strip_rows))
    raise ValueError(f"unknown ray matrix family {family!r}")


_FAMILY_WORDS = {
    "M_213": (3, (2, 1, 3)),
    "M_123": (3, (1, 2, 3)),
    "M_1": (1, (1,)),
    "M_12_A2": (2, (1, 2)),
}


def builtin_fan(family: str, m: int) -> Fan:
    """Fan of the word c^m with the printed ray matrix of the family."""
    rays = builtin_rays(family, m)
    if family == "M_12":
        system = coxeter.B2()
        complex_ = SubwordComplex(2, (1, 2) * m, system=system)
    else:
        n, c = _FAMILY_WORDS[family]
        complex_ = SubwordComplex(n, c * m)
    return build_fan(complex_, rays)


def fold_to_b2(m: int) -> QMatrix:
    """Assemble the rank-2 ray matrix by folding every bipartite block."""
    if m < 3:
        raise ValueError("folding needs m >= 3")
    d = 2 * m - 4
    blocks = [fold_block(i).rows for i in range(m - 2, 0, -1)]
    strip = _strip_columns(blocks)
    return QMatrix.identity(d).scale(-1).hstack(strip.transpose())


# ---------------------------------------------------------------------------
# Completeness checks
# ---------------------------------------------------------------------------

@dataclass
class Wall:
    """Ridge between adjacent facets with its normalized linear dependence.

    The dependence satisfies sum_r coeffs[r] * ray_r = 0 with coeffs[i] = 1
    on the leaving position; the flip condition holds iff coeffs[j] > 0.
    """

    facet_i: tuple[int, ...]
    facet_j: tuple[int, ...]
    pos_i: int
    pos_j: int
    coeffs: dict[int, Fraction]

    @property
    def flip_ok(self) -> bool:
        return self.coeffs[self.pos_j] > 0

    def verify(self, rays: QMatrix) -> bool:
        d = rays.nrows
        total = [Q(0)] * d
        for r, c in self.coeffs.items():
            col = rays.column(r)
            for t in range(d):
                total[t] += c * col[t]
        return all(x == 0 for x in total) and self.coeffs[self.pos_i] == 1


@dataclass
class FanCheckReport:
    """Verdicts of the completeness test: basis, flip, injectivity.

    ``orientation`` is +1 when the determinant signs follow the sign
    function, -1 when they all oppose it (a mirrored Gale dual; still a
    valid fan since the global sign is a normalization choice).
    """

    basis_ok: bool
    flip_ok: bool
    injective_ok: bool
    signature: SignatureReport
    orientation: int | None = None
    reference_facet: tuple[int, ...] | None = None
    intersecting_facet: tuple[int, ...] | None = None
    violating_wall: Wall | None = None

    @property
    def complete(self) -> bool:
        return self.basis_ok and self.flip_ok and self.injective_ok

    def to_json(self) -> str:
        return json.dumps({
            "basis_ok": self.basis_ok,
            "flip_ok": self.flip_ok,
            "injective_ok": self.injective_ok,
            "complete": self.complete,
            "orientation": self.orientation,
            "signature": {"good": self.signature.good, "bad": self.signature.bad,
                          "zero": self.signature.zero, "total": self.signature.total},
            "reference_facet": None if self.reference_facet is None
            else [p + 1 for p in self.reference_facet],
            "intersecting_facet": None if self.intersecting_facet is None
            else [p + 1 for p in self.intersecting_facet],
        }, sort_keys=True)


def negative_orthant_facet(fan: Fan) -> tuple[int, ...] | None:
    """The facet whose rays are the negative basis vectors, if there is one."""
    d = fan.dim
    coord_pos: dict[int, int] = {}
    for j in range(fan.rays.ncols):
        col = fan.rays.column(j)
        nz = [(t, x) for t, x in enumerate(col) if x != 0]
        if len(nz) == 1 and nz[0][1] == -1 and nz[0][0] not in coord_pos:
            coord_pos[nz[0][0]] = j
    if len(coord_pos) < d:
        return None
    facet = tuple(sorted(coord_pos.values()))
    if fan.complex.is_face(facet) and len(facet) == fan.complex.facet_size:
        return facet
    return None


def _reference_facet(fan: Fan) -> tuple[int, ...]:
    neg = negative_orthant_facet(fan)
    if neg is not None:
        return neg
    return min(fan.complex.facets())


def _cones_intersect(rays: QMatrix, ref: Sequence[int], other: Sequence[int]) -> bool:
    """Does the open cone of ``ref`` meet the cone of ``other``?

    Feasibility of R_ref (1 + lam) = R_other mu with lam, mu >= 0: a shared
    point with all ref-coordinates >= 1 (interior by scaling).
    """
    d = rays.nrows
    R_ref = rays.select_columns(ref)
    R_other = rays.select_columns(other)
    A = R_ref.hstack(R_other.scale(-1))
    b = [-x for x in R_ref.mul_vector([Q(1)] * len(ref))]
    out = solve_standard_form(A, b, [Q(0)] * A.ncols)
    return out.status != "infeasible"


def check_complete(fan: Fan, D: QMatrix, workers: int = 1,
                   collect_offenders: bool = False) -> FanCheckReport:
    """Completeness via the signature condition plus injectivity.

    ``D`` must be a Gale dual of the ray matrix: D @ rays.T == 0 with
    complementary ranks.  The signature tally decides the basis and flip
    conditions; injectivity holds when no other cone meets the open cone of
    the reference facet.
    """
    r = fan.rays.ncols
    N = fan.complex.system.longest_length
    if D.shape != (N, r):
        raise ValueError(f"Gale dual must be {N}x{r}, got {D.shape}")
    if not (D @ fan.rays.transpose()).is_zero():
        raise ValueError("D is not orthogonal to the ray matrix")
    if D.rank() != N or fan.rays.rank() != r - N:
        raise ValueError("D and the ray matrix do not have complementary ranks")

    sig = signature_report(D, fan.complex, collect_offenders=collect_offenders,
                           workers=workers)
    basis_ok = sig.zero == 0
    # All determinants must follow the sign function up to one global sign
    # (the normalization freedom of the sign function); counting matrices
    # come out with orientation +1.
    flip_ok = min(sig.good, sig.bad) == 0 and sig.total > 0
    orientation = None
    if basis_ok and flip_ok:
        orientation = 1 if sig.bad == 0 else -1
    report = FanCheckReport(basis_ok, flip_ok, False, sig, orientation)
    if not flip_ok and basis_ok:
        for wall in wall_relations(fan):
            if not wall.flip_ok:
                report.violating_wall = wall
                break
    if not (basis_ok and flip_ok):
        return report

    ref = _reference_facet(fan)
    report.reference_facet = ref
    for other in fan.complex.facets():
        if other == ref:
            continue
        if _cones_intersect(fan.rays, ref, other):
            report.intersecting_facet = other
            return report
    report.injective_ok = True
    return report


class DegeneratePointError(ValueError):
    """The sampled point lies on a cone boundary; re-sample."""


class ConeMembership:
    """Exact point-in-cone tests with the facet inverses computed once."""

    def __init__(self, fan: Fan):
        self.fan = fan
        self.inverses: list[tuple[tuple[int, ...], QMatrix]] = []
        for F in fan.complex.facets():
            R = fan.rays.select_columns(F)
            if R.nrows != R.ncols:
                raise ValueError("facet size disagrees with ambient dimension")
            try:
                self.inverses.append((F, R.inverse()))
            except ValueError as exc:
                raise DegeneratePointError(
                    f"facet {F} rays are dependent; basis condition fails") from exc

    def covering_number(self, point: Sequence) -> int:
        point = [Fraction(x) for x in point]
        count = 0
        for F, inv in self.inverses:
            lam = inv.mul_vector(point)
            if any(x == 0 for x in lam):
                raise DegeneratePointError(f"point on the boundary of cone {F}")
            if all(x > 0 for x in lam):
                count += 1
        return count

    def sample_generic_point(self, rng: random.Random,
                             max_attempts: int = 1000
                             ) -> tuple[list[Fraction], int]:
        primes = [3, 5, 7, 11, 13, 17, 19, 23]
        for _ in range(max_attempts):
            point = [Fraction(rng.randint(-50, 50), rng.choice(primes))
                     for _ in range(self.fan.dim)]
            if all(x == 0 for x in point):
                continue
            try:
                return point, self.covering_number(point)
            except DegeneratePointError:
                continue
        raise RuntimeError("could not sample a generic point")


def covering_number(fan: Fan, point: Sequence) -> int:
    """Number of maximal cones containing the point (generic points only)."""
    return ConeMembership(fan).covering_number(point)


def sample_generic_point(fan: Fan, rng: random.Random,
                         max_attempts: int = 1000) -> tuple[list[Fraction], int]:
    """A point in no cone boundary, with odd-prime denominators; returns the
    point and its covering number."""
    return ConeMembership(fan).sample_generic_point(rng, max_attempts)


# ---------------------------------------------------------------------------
# Gale normalization and link restriction
# ---------------------------------------------------------------------------

def gale_normalize(M: QMatrix, facet: Sequence[int]) -> QMatrix:
    """Left-multiply by the inverse of the facet column submatrix, making
    those columns the identity; the result spans the same row space."""
    sub = M.select_columns(facet)
    if sub.nrows != sub.ncols:
        raise ValueError("facet size must equal the number of rows")
    return sub.inverse() @ M


def restrict_to_link(M_normalized: QMatrix, face: Sequence[int],
                     facet: Sequence[int]) -> QMatrix:
    """Drop the columns of ``face`` and the unit rows they occupy.

    ``M_normalized`` must be normalized at ``facet`` (a superset of
    ``face``); the result is a Gale dual for the word with the positions of
    ``face`` removed.
    """
    face = sorted(face)
    facet = list(facet)
    if not set(face) <= set(facet):
        raise ValueError("face must be contained in the normalization facet")
    unit_rows = []
    for p in face:
        t = facet.index(p)
        col = M_normalized.column(p)
        if col[t] != 1 or any(col[s] != 0 for s in range(len(col)) if s != t):
            raise ValueError("matrix is not normalized at the given facet")
        unit_rows.append(t)
    keep_rows = [t for t in range(M_normalized.nrows) if t not in unit_rows]
    keep_cols = [p for p in range(M_normalized.ncols) if p not in face]
    return M_normalized.select_rows(keep_rows).select_columns(keep_cols)


# ---------------------------------------------------------------------------
# Wall relations
# ---------------------------------------------------------------------------

def wall_relations(fan: Fan) -> list[Wall]:
    """Linear dependence across every ridge, normalized on the leaving ray.

    Walls are reported once, keyed by the lexicographically smaller facet.
    Requires the basis condition on the facets it visits.
    """
    walls: list[Wall] = []
    seen: set[tuple[tuple[int, ...], tuple[int, ...]]] = set()
    for F in fan.complex.facets():
        R = fan.rays.select_columns(F)
        try:
            inv = R.inverse()
        except ValueError as exc:
            raise ValueError(f"facet {F} violates the basis condition") from exc
        for i in F:
            J, j = fan.complex.flip(F, i)
            key = (F, J) if F <= J else (J, F)
            if key in seen:
                continue
            seen.add(key)
            lam = inv.mul_vector(fan.rays.column(j))
            t = F.index(i)
            if lam[t] == 0:
                # Dependence avoids ray i entirely; normalization impossible.
                raise ValueError(f"degenerate wall between {F} and {J}")
            scale = -1 / lam[t]
            coeffs = {j: scale}
            for s, p in enumerate(F):
                c = -scale * lam[s] if p != i else Q(1)
                if p == i or c != 0:
                    coeffs[p] = c
            walls.append(Wall(F, J, i, j, coeffs))
    return walls
