"""Counting matrices, their closed forms and parametric families, and the
determinant-sign (signature) verifier.

The counting matrix of a word P built on a Coxeter element c has one row per
positive root alpha and one column per position of P; the entry counts the
reduced-expression subwords of the parabolic restriction of c that pass
through that position.  Row order is the inversion order of the c-sorting
word of the longest element, which reproduces the printed matrices.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from . import a4_data, coxeter
from .complexes import SubwordComplex
from .coxeter import Word
from .linalg import Q, QMatrix

__all__ = [
    "root_order",
    "counting_matrix",
    "counting_matrix_for_word",
    "closed_form_counting",
    "restricted_matrix",
    "enumerate_embeddings",
    "ParamSet",
    "param_counting",
    "check_signature_inequalities",
    "SignatureReport",
    "signature_report",
    "a4_builtin_matrices",
    "A4Builtins",
    "TABLE_EXPRESSIONS",
    "table_formula",
    "table_sign",
    "copy_pattern",
    "valid_copy_tuples",
    "random_valid_copy_tuple",
    "table_formula_check",
    "columns_for_copies",
]


# ---------------------------------------------------------------------------
# Counting matrices
# ---------------------------------------------------------------------------

def _greedy_w0_positions(n: int, c: tuple[int, ...]) -> list[int]:
    """0-based positions of the greedy (leftmost) reduced word of w0 in c^oo."""
    N = n * (n + 1) // 2
    positions = []
    p = coxeter.identity(n)
    ell = 0
    pos = 0
    while ell < N:
        i = c[pos % n]
        q = coxeter.apply_gen(p, i)
        if coxeter.length(q) == ell + 1:
            p = q
            ell += 1
            positions.append(pos)
        pos += 1
    return positions


def root_order(n: int, c: Sequence[int]) -> list[coxeter.Root]:
    """Positive roots in the inversion order of the c-sorting word of w0,
    orientation-normalized.

    The inversion order reproduces the printed row orders.  For the other
    Coxeter element words the orientation of the determinants is pinned by
    the anchor condition sign(w) * det > 0 at the greedy embedded c-sorting
    word; when the inversion order violates it, the last two rows are
    swapped (a global determinant sign flip).
    """
    c = tuple(c)
    word = coxeter.sorted_word_w0(n, c)
    order = coxeter.inversion_sequence(n, word)
    positions = _greedy_w0_positions(n, c)
    m = positions[-1] // n + 1
    target = c * m
    rows = []
    for alpha in order:
        _, c_alpha = coxeter.parabolic_data(alpha, c)
        element = coxeter.evaluate(n, c_alpha)
        counts = [0] * len(target)
        for pattern in coxeter.enumerate_reduced_words(n, element):
            for j, v in enumerate(_count_through(pattern, target)):
                counts[j] += v
        rows.append([counts[p] for p in positions])
    det = QMatrix(rows).determinant()
    if det == 0:
        raise RuntimeError("anchor determinant vanished; cannot orient root order")
    if coxeter.sign_w0(n, word) * det < 0:
        order[-2], order[-1] = order[-1], order[-2]
    return order


def _count_through(pattern: Word, word: Word) -> list[int]:
    """For each position j of ``word``, the number of strictly increasing
    embeddings of ``pattern`` into ``word`` whose image contains j."""
    t = len(pattern)
    r = len(word)
    # fwd[s][j]: embeddings of pattern[:s] into positions < j.
    fwd = [[0] * (r + 1) for _ in range(t + 1)]
    fwd[0] = [1] * (r + 1)
    for s in range(1, t + 1):
        for j in range(1, r + 1):
            fwd[s][j] = fwd[s][j - 1]
            if word[j - 1] == pattern[s - 1]:
                fwd[s][j] += fwd[s - 1][j - 1]
    # bwd[s][j]: embeddings of pattern[s:] into positions > j (0-based j).
    bwd = [[0] * (r + 1) for _ in range(t + 1)]
    bwd[t] = [1] * (r + 1)
    for s in range(t - 1, -1, -1):
        for j in range(r - 1, -1, -1):
            bwd[s][j] = bwd[s][j + 1]
            if word[j] == pattern[s]:
                bwd[s][j] += bwd[s + 1][j + 1]
    out = [0] * r
    for j in range(r):
        total = 0
        for s in range(t):
            if pattern[s] == word[j]:
                total += fwd[s][j] * bwd[s + 1][j + 1]
        out[j] = total
    return out


def counting_matrix_for_word(n: int, c: Sequence[int], word: Sequence[int]) -> QMatrix:
    """Counting matrix of an arbitrary word built on the Coxeter element c."""
    c = tuple(c)
    word = tuple(word)
    if not coxeter.is_coxeter_word(n, c):
        raise ValueError(f"{c} is not a Coxeter element word of rank {n}")
    rows = []
    for alpha in root_order(n, c):
        _, c_alpha = coxeter.parabolic_data(alpha, c)
        element = coxeter.evaluate(n, c_alpha)
        counts = [0] * len(word)
        for pattern in coxeter.enumerate_reduced_words(n, element):
            for j, v in enumerate(_count_through(pattern, word)):
                counts[j] += v
        rows.append(counts)
    return QMatrix(rows)


def counting_matrix(n: int, c: Sequence[int], m: int) -> QMatrix:
    """Counting matrix of c^m (rows: positive roots, columns: positions)."""
    if m < 1:
        raise ValueError("power m must be at least 1")
    return counting_matrix_for_word(n, c, tuple(c) * m)


def _binom2(x: Fraction) -> Fraction:
    return x * (x - 1) / 2


def closed_form_counting(c: Sequence[int], m: int) -> QMatrix:
    """Printed closed forms of the counting matrices, assembled blockwise.

    Supported: rank 1; rank 2 c = (1,2); rank 3 c = (2,1,3) and (1,2,3).
    Blocks are indexed by the copy of c counted from the right.
    """
    c = tuple(c)
    if c == (1,):
        return QMatrix([[1] * m])
    if c == (1, 2):
        cols = []
        for i in range(m, 0, -1):
            cols.append([1, i, 0])
            cols.append([0, m - i + 1, 1])
        return QMatrix.from_columns(cols)
    if c == (2, 1, 3):
        C = Fraction(m * (m + 1), 2)
        cols = []
        for i in range(m, 0, -1):
            cols.append([1, i, i, i * i, 0, 0])
            cols.append([0, m - i + 1, 0, C - _binom2(Q(i)), 0, 1])
            cols.append([0, 0, m - i + 1, C - _binom2(Q(i)), 1, 0])
        return QMatrix.from_columns(cols)
    if c == (1, 2, 3):
        cols = []
        for i in range(m, 0, -1):
            cols.append([1, i, _binom2(Q(i + 1)), 0, 0, 0])
            cols.append([0, m - i + 1, (m - i + 1) * i, 1, i, 0])
            cols.append([0, 0, _binom2(Q(m - i + 2)), 0, m - i + 1, 1])
        return QMatrix.from_columns(cols)
    raise ValueError(f"no closed form implemented for c = {c}")


# ---------------------------------------------------------------------------
# Embeddings and restricted matrices
# ---------------------------------------------------------------------------

def enumerate_embeddings(word: Sequence[int], target: Sequence[int]):
    """All strictly increasing letter-preserving maps of ``word`` into
    ``target``, yielded as 0-based position tuples."""
    word = tuple(word)
    target = tuple(target)
    r, rt = len(word), len(target)

    def rec(t: int, start: int):
        if t == r:
            yield ()
            return
        for j in range(start, rt - (r - t - 1)):
            if target[j] == word[t]:
                for rest in rec(t + 1, j + 1):
                    yield (j,) + rest

    yield from rec(0, 0)


def restricted_matrix(D: QMatrix, positions: Sequence[int]) -> QMatrix:
    """Columns of a counting matrix at the (0-based) embedded positions."""
    positions = list(positions)
    if any(not 0 <= p < D.ncols for p in positions):
        raise ValueError("embedding positions out of range")
    if sorted(set(positions)) != positions:
        raise ValueError("embedding positions must be strictly increasing")
    return D.select_columns(positions)


# ---------------------------------------------------------------------------
# Parametric families (rank 3)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ParamSet:
    """Real parameters {a_i, b_i, c_i}, i = 1..m, as exact rationals."""

    m: int
    a: tuple[Fraction, ...]
    b: tuple[Fraction, ...]
    c: tuple[Fraction, ...]

    def __post_init__(self):
        for name in ("a", "b", "c"):
            seq = tuple(Fraction(x) for x in getattr(self, name))
            if len(seq) != self.m:
                raise ValueError(f"{name} must have m = {self.m} entries")
            object.__setattr__(self, name, seq)

    @classmethod
    def standard(cls, m: int) -> "ParamSet":
        ints = tuple(Fraction(i) for i in range(1, m + 1))
        return cls(m, ints, ints, ints)

    def at(self, name: str, i: int) -> Fraction:
        """1-based access to parameter family ``name``."""
        return getattr(self, name)[i - 1]


def param_counting(c: Sequence[int], params: ParamSet) -> QMatrix:
    """Parametric counting matrix for rank 3, c = (1,2,3) or (2,1,3).

    Instantiating a_i = b_i = c_i = i recovers the closed-form matrix.
    """
    c = tuple(c)
    m = params.m
    cols = []
    if c == (2, 1, 3):
        C = Fraction(m * (m + 1), 2)
        for i in range(m, 0, -1):
            ai, bi, ci = params.at("a", i), params.at("b", i), params.at("c", i)
            cols.append([1, ai, ai, ai * ai, 0, 0])
            cols.append([0, m - bi + 1, 0, C - _binom2(bi), 0, 1])
            cols.append([0, 0, m - ci + 1, C - _binom2(ci), 1, 0])
        return QMatrix.from_columns(cols)
    if c == (1, 2, 3):
        for i in range(m, 0, -1):
            ai, bi, ci = params.at("a", i), params.at("b", i), params.at("c", i)
            cols.append([1, ai, _binom2(ai + 1), 0, 0, 0])
            cols.append([0, m - bi + 1, (m - bi + 1) * bi, 1, bi, 0])
            cols.append([0, 0, _binom2(m - ci + 2), 0, m - ci + 1, 1])
        return QMatrix.from_columns(cols)
    raise ValueError(f"no parametric family implemented for c = {c}")


def check_signature_inequalities(c: Sequence[int], params: ParamSet
                                 ) -> tuple[bool, list[str]]:
    """Evaluate the strict linear systems guarding the parametric families.

    Both families require each parameter chain to increase strictly, plus two
    symmetric families of pairwise sums (i = j allowed).  Returns the verdict
    and the list of violated inequalities.
    """
    c = tuple(c)
    m = params.m
    violated: list[str] = []

    def need(value: Fraction, desc: str) -> None:
        if not value > 0:
            violated.append(f"{desc} = {value} <= 0")

    for name in ("a", "b", "c"):
        for i in range(2, m + 1):
            need(params.at(name, i) - params.at(name, i - 1),
                 f"{name}_{i} - {name}_{i-1}")

    if c == (1, 2, 3):
        for i in range(2, m + 1):
            for j in range(2, i + 1):
                v = (2 * params.at("b", i) - params.at("c", i) - params.at("a", i - 1)
                     + 2 * params.at("b", j) - params.at("c", j) - params.at("a", j - 1))
                need(v, f"2b_{i}-c_{i}-a_{i-1} + 2b_{j}-c_{j}-a_{j-1}")
        for i in range(1, m):
            for j in range(1, i + 1):
                v = (params.at("c", i + 1) + params.at("a", i) - 2 * params.at("b", i)
                     + params.at("c", j + 1) + params.at("a", j) - 2 * params.at("b", j))
                need(v, f"c_{i+1}+a_{i}-2b_{i} + c_{j+1}+a_{j}-2b_{j}")
    elif c == (2, 1, 3):
        for i in range(1, m + 1):
            for j in range(1, i + 1):
                v = (2 * params.at("a", i) - params.at("b", i) - params.at("c", i)
                     + 2 * params.at("a", j) - params.at("b", j) - params.at("c", j) + 2)
                need(v, f"2a_{i}-b_{i}-c_{i} + 2a_{j}-b_{j}-c_{j} + 2")
        for i in range(2, m + 1):
            for j in range(2, i + 1):
                v = (params.at("b", i) + params.at("c", i) - 2 * params.at("a", i - 1)
                     + params.at("b", j) + params.at("c", j) - 2 * params.at("a", j - 1) - 2)
                need(v, f"b_{i}+c_{i}-2a_{i-1} + b_{j}+c_{j}-2a_{j-1} - 2")
    else:
        raise ValueError(f"no signature inequalities implemented for c = {c}")
    return not violated, violated


# ---------------------------------------------------------------------------
# Signature reports
# ---------------------------------------------------------------------------

@dataclass
class SignatureReport:
    """Tally of determinant signs over all reduced-expression subwords."""

    good: int
    bad: int
    zero: int
    offenders: list[tuple[tuple[int, ...], str]] = field(default_factory=list)

    @property
    def total(self) -> int:
        return self.good + self.bad + self.zero

    @property
    def is_signature(self) -> bool:
        return self.bad == 0 and self.zero == 0

    def to_json(self) -> str:
        return json.dumps({
            "good": self.good, "bad": self.bad, "zero": self.zero,
            "total": self.total,
            "offenders": [{"positions": [p + 1 for p in pos], "kind": kind}
                          for pos, kind in self.offenders],
        }, sort_keys=True)

    def csv_row(self) -> str:
        return f"{self.good},{self.bad},{self.zero},{self.total}"


def _tally_chunk(args) -> tuple[int, int, int, list[tuple[tuple[int, ...], str]]]:
    d_rows, word, subwords, sign_kind, order = args
    D = QMatrix(d_rows)
    good = bad = zero = 0
    offenders = []
    for pos in subwords:
        letters = tuple(word[p] for p in pos)
        if sign_kind == "A":
            s = coxeter.sign_w0(order, letters)
        else:
            s = coxeter.B2(order=order).sign_w0(letters)
        det = D.select_columns(pos).determinant()
        v = s * det
        if v > 0:
            good += 1
        elif v < 0:
            bad += 1
            offenders.append((pos, "bad"))
        else:
            zero += 1
            offenders.append((pos, "zero"))
    return good, bad, zero, offenders


def signature_report(D: QMatrix, complex_: SubwordComplex,
                     collect_offenders: bool = False,
                     workers: int = 1) -> SignatureReport:
    """Tally sign(w) * det(D columns at w) over all reduced subwords of w0.

    ``D`` must have one column per position of the word and square-many rows
    (the longest length).  Positive products are good, negative bad.
    """
    sys = complex_.system
    N = sys.longest_length
    if D.nrows != N or D.ncols != complex_.size:
        raise ValueError(f"matrix shape {D.shape} does not fit word of length "
                         f"{complex_.size} with longest length {N}")
    subwords = complex_.reduced_subwords()
    if not subwords:
        raise ValueError("word contains no reduced expression of the longest element")
    sign_kind = "A" if isinstance(sys, coxeter.TypeA) else "B2"
    order = complex_.rank if sign_kind == "A" else sys.order
    if workers <= 1 or len(subwords) < 64:
        g, b, z, off = _tally_chunk((D.rows, complex_.word, subwords, sign_kind, order))
    else:
        chunks = [subwords[i::workers] for i in range(workers)]
        g = b = z = 0
        off = []
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for gg, bb, zz, oo in pool.map(
                    _tally_chunk,
                    [(D.rows, complex_.word, ch, sign_kind, order) for ch in chunks]):
                g += gg
                b += bb
                z += zz
                off.extend(oo)
        off.sort()
    return SignatureReport(g, b, z, off if collect_offenders else [])


# ---------------------------------------------------------------------------
# Built-in rank-4 matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class A4Builtins:
    signature_9_2: QMatrix
    signature_11_3: QMatrix
    rays_9_2: QMatrix
    rays_11_3: QMatrix
    labels_9_2: tuple[tuple[int, int], ...]
    labels_11_3: tuple[tuple[int, int], ...]


def a4_builtin_matrices() -> A4Builtins:
    """The exact rank-4 fan matrices (rays as rows) and their Gale duals."""
    return A4Builtins(
        signature_9_2=a4_data.signature_9_2(),
        signature_11_3=a4_data.signature_11_3(),
        rays_9_2=a4_data.rays_9_2(),
        rays_11_3=a4_data.rays_11_3(),
        labels_9_2=a4_data.RAY_LABELS_9_2,
        labels_11_3=a4_data.RAY_LABELS_11_3,
    )


# ---------------------------------------------------------------------------
# Determinant formula tables for rank 3, Q = c^m
# ---------------------------------------------------------------------------

TABLE_EXPRESSIONS: tuple[str, ...] = (
    "123121", "121321", "231231", "231213", "213231", "213213",
    "123212", "212321", "321323", "323123", "132132", "132312",
    "312132", "312312", "232123", "321232",
)

def _half(x: Fraction) -> Fraction:
    return x / 2


# Closed-form determinants, one per reduced expression of w0; the parameters
# a..f are the copies of c (counted from right to left) holding the six
# letters.  The two Coxeter elements share every factor except the constant
# term of the long sum factors.
def _table_formulas(shift: int) -> dict[str, Callable]:
    s = shift

    def sum1(a, b, c, d, e, f):  # 2(a+d)-b-c-e-f (+2 for bipartite c)
        return 2 * (a + d) - b - c - e - f + s

    def sum2(a, b, c, d, e, f):  # a+b+d+e-2(c+f) (-2 for bipartite c)
        return a + b + d + e - 2 * (c + f) - s

    return {
        "123121": lambda a, b, c, d, e, f: _half((a - d) * (a - f) * (b - e) * (d - f)),
        "121321": lambda a, b, c, d, e, f: -_half((a - c) * (a - f) * (b - e) * (c - f)),
        "231231": lambda a, b, c, d, e, f: _half((a - d) * (b - e) * (c - f) * sum1(a, b, c, d, e, f)),
        "231213": lambda a, b, c, d, e, f: -_half((a - d) * (b - f) * (c - e) * sum1(a, b, c, d, e, f)),
        "213231": lambda a, b, c, d, e, f: -_half((a - d) * (c - e) * (b - f) * sum1(a, b, c, d, e, f)),
        "213213": lambda a, b, c, d, e, f: _half((a - d) * (c - f) * (b - e) * sum1(a, b, c, d, e, f)),
        "123212": lambda a, b, c, d, e, f: (a - e) * (b - d) * (b - f) * (d - f),
        "212321": lambda a, b, c, d, e, f: -(a - c) * (a - e) * (b - f) * (c - e),
        "321323": lambda a, b, c, d, e, f: _half((a - d) * (a - f) * (b - e) * (d - f)),
        "323123": lambda a, b, c, d, e, f: -_half((a - c) * (a - f) * (b - e) * (c - f)),
        "132132": lambda a, b, c, d, e, f: -_half((a - d) * (b - e) * (c - f) * sum2(a, b, c, d, e, f)),
        "132312": lambda a, b, c, d, e, f: _half((a - e) * (b - d) * (c - f) * sum2(a, b, c, d, e, f)),
        "312132": lambda a, b, c, d, e, f: _half((a - e) * (b - d) * (c - f) * sum2(a, b, c, d, e, f)),
        "312312": lambda a, b, c, d, e, f: -_half((a - d) * (b - e) * (c - f) * sum2(a, b, c, d, e, f)),
        "232123": lambda a, b, c, d, e, f: -(a - c) * (a - e) * (b - f) * (c - e),
        "321232": lambda a, b, c, d, e, f: (a - e) * (b - d) * (b - f) * (d - f),
    }


_TABLE_213 = _table_formulas(shift=2)
_TABLE_123 = _table_formulas(shift=0)

_TABLE_SIGNS = {
    "123121": 1, "121321": -1, "231231": 1, "231213": -1, "213231": -1,
    "213213": 1, "123212": 1, "212321": -1, "321323": 1, "323123": -1,
    "132132": -1, "132312": 1, "312132": 1, "312312": -1, "232123": -1,
    "321232": 1,
}


def _table_for(c: Sequence[int]) -> dict[str, Callable]:
    c = tuple(c)
    if c == (2, 1, 3):
        return _TABLE_213
    if c == (1, 2, 3):
        return _TABLE_123
    raise ValueError(f"no determinant table for c = {c}")


def table_formula(c: Sequence[int], expr: str, tup: Sequence) -> Fraction:
    """Closed-form determinant for one reduced expression at a copy tuple."""
    if expr not in TABLE_EXPRESSIONS:
        raise ValueError(f"unknown expression {expr!r}")
    return _table_for(c)[expr](*(Fraction(x) for x in tup))


def table_sign(expr: str) -> int:
    if expr not in TABLE_EXPRESSIONS:
        raise ValueError(f"unknown expression {expr!r}")
    return _TABLE_SIGNS[expr]


def copy_pattern(c: Sequence[int], expr: str) -> list[bool]:
    """Strictness pattern of the copy chain a >= b >= ... for an expression.

    Entry t is True when the step from the t-th to the (t+1)-th letter forces
    a strictly smaller copy (the next letter does not come later within one
    copy of c).
    """
    c = tuple(c)
    slots = {letter: k for k, letter in enumerate(c)}
    letters = [int(ch) for ch in expr]
    return [slots[letters[t + 1]] <= slots[letters[t]] for t in range(len(letters) - 1)]


def valid_copy_tuples(c: Sequence[int], expr: str, m: int):
    """All copy tuples (a, ..., f) embedding ``expr`` into c^m, right to left."""
    strict = copy_pattern(c, expr)
    k = len(expr)

    def rec(t: int, prev: int):
        if t == k:
            yield ()
            return
        hi = prev - 1 if t > 0 and strict[t - 1] else prev
        for v in range(hi, 0, -1):
            for rest in rec(t + 1, v):
                yield (v,) + rest

    yield from rec(0, m)


def random_valid_copy_tuple(rng, c: Sequence[int], expr: str, m: int) -> tuple[int, ...]:
    """One uniform-ish valid copy tuple with entries in 1..m."""
    strict = copy_pattern(c, expr)
    k = len(expr)
    for _ in range(10000):
        tup = sorted((rng.randint(1, m) for _ in range(k)), reverse=True)
        ok = True
        for t in range(k - 1):
            if strict[t] and tup[t] == tup[t + 1]:
                ok = False
                break
        if ok:
            return tuple(tup)
    raise RuntimeError("could not sample a valid copy tuple; increase m")


def columns_for_copies(c: Sequence[int], expr: str, tup: Sequence[int], m: int,
                       direction: str = "right") -> list[int]:
    """0-based column indices of c^m for the letters of ``expr`` at the given
    copies.  ``direction`` says whether copies are counted from the right
    (the table convention) or from the left."""
    c = tuple(c)
    slots = {letter: k for k, letter in enumerate(c)}
    cols = []
    for letter_ch, copy_idx in zip(expr, tup):
        letter = int(letter_ch)
        if direction == "right":
            block = m - copy_idx
        elif direction == "left":
            block = copy_idx - 1
        else:
            raise ValueError("direction must be 'right' or 'left'")
        cols.append(block * len(c) + slots[letter])
    if cols != sorted(cols) or len(set(cols)) != len(cols):
        raise ValueError(f"copy tuple {tuple(tup)} does not embed {expr} into c^{m}")
    return cols


def table_formula_check(c: Sequence[int], expr: str, tup: Sequence[int],
                        m: int | None = None, direction: str = "right"
                        ) -> tuple[bool, Fraction, Fraction]:
    """Compare the direct determinant against the table's closed form.

    Returns (match, determinant, formula value).  The counting matrix power
    defaults to max(tup); the determinant does not depend on it.
    """
    tup = tuple(int(x) for x in tup)
    if m is None:
        m = max(tup)
    D = counting_matrix(3, c, m)
    cols = columns_for_copies(c, expr, tup, m, direction)
    det = D.select_columns(cols).determinant()
    expected = table_formula(c, expr, tup)
    return det == expected, det, expected
