"""Subword complexes and multi-associahedron combinatorics.

Faces of the subword complex of a word Q are position sets whose complement
still contains a reduced expression of the longest element.  Facets are
therefore complements of reduced-expression subwords.  Positions are
0-based internally; serialization uses 1-based positions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

from . import coxeter
from .coxeter import TypeA, Word

__all__ = [
    "SubwordComplex",
    "FacetComplex",
    "relevant_diagonals",
    "diagonals_cross",
    "enumerate_k_triangulations",
    "multiassoc",
    "multiassoc_word",
    "diagonal_labels_2k4",
    "obs_a3",
    "example_71",
    "obs_a3_vertex_bijection",
    "commutation_class",
    "OBS_A3_WORD",
]


@dataclass(frozen=True)
class FacetComplex:
    """A plain simplicial complex given by its facet list."""

    ground: tuple[int, ...]
    facets: tuple[tuple[int, ...], ...]

    def f_vector(self) -> tuple[int, ...]:
        return _f_vector_from_facets(self.ground, self.facets)

    def euler_characteristic(self) -> int:
        fv = self.f_vector()
        return sum((-1) ** i * f for i, f in enumerate(fv[1:]))


@dataclass(frozen=True)
class SubwordComplex:
    """Spherical subword complex of a word in a Coxeter system.

    ``system`` defaults to type A of the given rank; the target element is
    always the longest element.
    """

    rank: int
    word: Word
    system: object = None

    def __post_init__(self):
        if self.system is None:
            object.__setattr__(self, "system", TypeA(self.rank))
        object.__setattr__(self, "word", tuple(self.word))

    # -- core enumeration --------------------------------------------------

    @property
    def size(self) -> int:
        return len(self.word)

    @property
    def facet_size(self) -> int:
        return len(self.word) - self.system.longest_length

    def _completion_table(self) -> list[set]:
        """can[k] = elements u completable to w0 by a subword of word[k:]."""
        sys = self.system
        r = len(self.word)
        can: list[set] = [set() for _ in range(r + 1)]
        can[r] = {sys.longest()}
        for k in range(r - 1, -1, -1):
            i = self.word[k]
            nxt = can[k + 1]
            cur = set(nxt)
            for u in nxt:
                # u = s_i * v for the v we would extend by taking letter k.
                v = sys.apply(u, i)
                if sys.length(v) + 1 == sys.length(u):
                    cur.add(v)
            can[k] = cur
        return can

    def reduced_subwords(self) -> list[tuple[int, ...]]:
        """All position sets spelling a reduced expression of w0, sorted."""
        sys = self.system
        r = len(self.word)
        N = sys.longest_length
        can = self._completion_table()
        if sys.identity() not in can[0]:
            raise ValueError("word contains no reduced expression of the longest element")
        out: list[tuple[int, ...]] = []
        chosen: list[int] = []

        def extend(k: int, u) -> None:
            if len(chosen) == N:
                out.append(tuple(chosen))
                return
            if k == r:
                return
            i = self.word[k]
            v = sys.apply(u, i)
            # Take letter k if it stays reduced and remains completable.
            if sys.length(v) == len(chosen) + 1 and v in can[k + 1]:
                chosen.append(k)
                extend(k + 1, v)
                chosen.pop()
            # Skip letter k if completion is still possible without it.
            if u in can[k + 1]:
                extend(k + 1, u)

        extend(0, sys.identity())
        return out

    def facets(self) -> list[tuple[int, ...]]:
        """Facets as sorted 0-based position tuples."""
        r = len(self.word)
        full = set(range(r))
        return sorted(tuple(sorted(full - set(sub))) for sub in self.reduced_subwords())

    def facet_count(self) -> int:
        return len(self.reduced_subwords())

    def is_face(self, face: Sequence[int]) -> bool:
        face = set(face)
        rest = [self.word[k] for k in range(len(self.word)) if k not in face]
        return _contains_reduced_w0(self.system, rest)

    # -- derived data --------------------------------------------------------

    def f_vector(self) -> tuple[int, ...]:
        return _f_vector_from_facets(tuple(range(self.size)), self.facets())

    def euler_characteristic(self) -> int:
        fv = self.f_vector()
        return sum((-1) ** i * f for i, f in enumerate(fv[1:]))

    def flip(self, facet: Sequence[int], i: int) -> tuple[tuple[int, ...], int]:
        """The unique facet F' with F - {i} = F' - {j}; returns (F', j).

        ``i`` is a 0-based position contained in ``facet``.
        """
        sys = self.system
        facet = tuple(sorted(facet))
        if i not in facet:
            raise ValueError("position not in facet")
        comp = [k for k in range(self.size) if k not in facet or k == i]
        # comp spells w0 with one extra letter; deleting index t != position(i)
        # must again spell w0.  Prefix/suffix products make each test O(1).
        letters = [self.word[k] for k in comp]
        n1 = len(letters)
        prefix = [sys.identity()]
        for a in letters:
            prefix.append(sys.apply(prefix[-1], a))
        suffix = [sys.longest()] * (n1 + 1)
        suffix[n1] = sys.identity()
        for t in range(n1 - 1, -1, -1):
            suffix[t] = _left_apply(sys, letters[t], suffix[t + 1])
        w0 = sys.longest()
        i_idx = comp.index(i)
        for t in range(n1):
            if t == i_idx:
                continue
            if _compose(sys, prefix[t], suffix[t + 1]) == w0:
                j = comp[t]
                new_facet = tuple(sorted(set(facet) - {i} | {j}))
                return new_facet, j
        raise RuntimeError("no flip found; complex is not spherical at this facet")

    def flips(self, facet: Sequence[int]) -> list[tuple[int, tuple[int, ...], int]]:
        return [(i, *self.flip(facet, i)) for i in facet]

    def link(self, face: Sequence[int]) -> FacetComplex:
        face = tuple(sorted(face))
        if not self.is_face(face):
            raise ValueError("not a face of the complex")
        fs = set(face)
        facets = sorted(tuple(p for p in F if p not in fs)
                        for F in self.facets() if fs <= set(F))
        ground = tuple(p for p in range(self.size) if p not in fs)
        return FacetComplex(ground, tuple(facets))

    # -- serialization ---------------------------------------------------------

    def to_json(self) -> str:
        return json.dumps({
            "rank": self.rank,
            "word": list(self.word),
            "facets": [[p + 1 for p in F] for F in self.facets()],
        }, sort_keys=True)

    def facets_polymake(self) -> str:
        """Polymake-style plain text: one facet per line, 0-based indices."""
        return "\n".join("{" + " ".join(map(str, F)) + "}" for F in self.facets())


def _left_apply(sys, i: int, el):
    """Left multiplication s_i * el for the systems used here."""
    if isinstance(sys, TypeA):
        p = list(el)
        a = p.index(i)
        b = p.index(i + 1)
        p[a], p[b] = p[b], p[a]
        return tuple(p)
    return sys.evaluate((i,) + tuple(el))  # B2 elements are canonical words


def _compose(sys, a, b):
    """Group product a * b."""
    if isinstance(sys, TypeA):
        return tuple(a[x - 1] for x in b)
    return sys.evaluate(tuple(a) + tuple(b))


def _contains_reduced_w0(sys, letters: Sequence[int]) -> bool:
    """Does the word contain a reduced expression of w0?  Greedy Demazure scan."""
    reach = {sys.identity()}
    for i in letters:
        new = set(reach)
        for u in reach:
            v = sys.apply(u, i)
            if sys.length(v) > sys.length(u):
                new.add(v)
        reach = new
    return sys.longest() in reach


def _f_vector_from_facets(ground: Sequence[int], facets: Sequence[Sequence[int]]
                          ) -> tuple[int, ...]:
    """(f_-1, f_0, ..., f_d) by downward closure over facet bitmasks."""
    index = {p: t for t, p in enumerate(ground)}
    masks = set()
    top = 0
    for F in facets:
        m = 0
        for p in F:
            m |= 1 << index[p]
        masks.add(m)
        top = max(top, len(F))
    counts = [0] * (top + 1)
    level = masks
    size = top
    while size > 0:
        counts[size] = len(level)
        nxt = set()
        for m in level:
            mm = m
            while mm:
                low = mm & -mm
                nxt.add(m ^ low)
                mm ^= low
        level = nxt
        size -= 1
    # counts[k] = number of faces with k vertices; prepend f_-1 = 1.
    return (1, *counts[1:])


# ---------------------------------------------------------------------------
# Multi-associahedra and k-triangulations
# ---------------------------------------------------------------------------

def relevant_diagonals(ell: int, k: int) -> list[tuple[int, int]]:
    """k-relevant diagonals of a convex ell-gon, lexicographically sorted.

    A diagonal is k-relevant when at least k vertices lie strictly on each
    side.
    """
    out = []
    for p in range(1, ell + 1):
        for q in range(p + 1, ell + 1):
            inside = q - p - 1
            outside = ell - (q - p) - 1
            if inside >= k and outside >= k:
                out.append((p, q))
    return out


def diagonals_cross(d1: tuple[int, int], d2: tuple[int, int]) -> bool:
    (a, b), (c, d) = sorted(d1), sorted(d2)
    return (a < c < b < d) or (c < a < d < b)


def enumerate_k_triangulations(ell: int, k: int) -> list[frozenset[tuple[int, int]]]:
    """All maximal (k+1)-crossing-free sets of k-relevant diagonals.

    Backtracking in lexicographic order; maximality is checked explicitly,
    making this an independent oracle for subword-complex facet counts.
    """
    diags = relevant_diagonals(ell, k)
    nd = len(diags)
    crossing = [0] * nd
    for i in range(nd):
        for j in range(nd):
            if i != j and diagonals_cross(diags[i], diags[j]):
                crossing[i] |= 1 << j

    def creates_crossing(chosen_mask: int, v: int) -> bool:
        # Adding v creates a (k+1)-crossing iff its crossing-neighborhood
        # inside the chosen set contains a k-clique.
        return _has_clique(crossing, chosen_mask & crossing[v], k)

    results: list[frozenset[tuple[int, int]]] = []

    def backtrack(start: int, chosen_mask: int, chosen: list[int]) -> None:
        for v in range(start, nd):
            if not creates_crossing(chosen_mask, v):
                chosen.append(v)
                backtrack(v + 1, chosen_mask | (1 << v), chosen)
                chosen.pop()
        # Maximal iff no diagonal at all (also earlier ones) can be added.
        extendable = any(
            not (chosen_mask >> v) & 1 and not creates_crossing(chosen_mask, v)
            for v in range(nd)
        )
        if not extendable:
            results.append(frozenset(diags[v] for v in chosen))

    backtrack(0, 0, [])
    return results


def _has_clique(crossing: list[int], mask: int, size: int) -> bool:
    if size == 0:
        return True
    if bin(mask).count("1") < size:
        return False
    m = mask
    while m:
        low = m & -m
        v = low.bit_length() - 1
        m ^= low
        if _has_clique(crossing, m & crossing[v], size - 1):
            return True
    return False


def multiassoc_word(n: int, k: int, c: Sequence[int]) -> Word:
    """The word c^k w0(c) whose subword complex is the multi-associahedron."""
    c = tuple(c)
    if not coxeter.is_coxeter_word(n, c):
        raise ValueError(f"{c} is not a Coxeter element word of rank {n}")
    return c * k + coxeter.sorted_word_w0(n, c)


def diagonal_labels_2k4(k: int) -> list[tuple[int, int]]:
    """Column-to-diagonal labels for the bipartite A3 word c^(k+2), c = 213.

    Vertices of the (2k+4)-gon are labeled cyclically; the lexicographically
    first k-relevant diagonal labels the last column, the remaining ones
    label columns 1..3k+5 in lexicographic order.
    """
    ell = 2 * k + 4
    diags = relevant_diagonals(ell, k)
    return diags[1:] + diags[:1]


def multiassoc(n: int, k: int, c: Sequence[int]
               ) -> tuple[SubwordComplex, list[tuple[int, int]] | None]:
    """Multi-associahedron as a subword complex, with diagonal labels when
    the bipartite 2k+4 labeling applies (rank 3, c = (2,1,3))."""
    word = multiassoc_word(n, k, tuple(c))
    complex_ = SubwordComplex(n, word)
    labels = None
    if n == 3 and tuple(c) == (2, 1, 3):
        labels = diagonal_labels_2k4(k)
    return complex_, labels


def commutation_class(n: int, word: Word) -> frozenset[Word]:
    """All words reachable by swapping adjacent commuting letters."""
    word = tuple(word)
    seen = {word}
    stack = [word]
    while stack:
        w = stack.pop()
        for t in range(len(w) - 1):
            if abs(w[t] - w[t + 1]) >= 2:
                w2 = w[:t] + (w[t + 1], w[t]) + w[t + 2:]
                if w2 not in seen:
                    seen.add(w2)
                    stack.append(w2)
    return frozenset(seen)


# ---------------------------------------------------------------------------
# The rank-3 regularity obstruction and its polytopal double
# ---------------------------------------------------------------------------

OBS_A3_WORD: Word = (1, 2, 1, 2, 3, 2, 1, 2, 1, 2)


def obs_a3() -> SubwordComplex:
    """The 10-letter rank-3 subword complex whose fans all test non-regular."""
    return SubwordComplex(3, OBS_A3_WORD)


def example_71() -> FacetComplex:
    """Join of a square and a pentagon, modified across one square diagonal.

    Ground set {1..9}; the join of the cycles (1234) and (56789) loses the
    facets through the diagonal {1,4} and gains six tetrahedra triangulating
    a bipyramid over the pentagon.
    """
    c1 = [(1, 2), (2, 3), (3, 4), (4, 1)]
    c2 = [(5, 6), (6, 7), (7, 8), (8, 9), (9, 5)]
    facets = {frozenset(e1 + e2) for e1 in c1 for e2 in c2}
    facets |= {
        frozenset({1, 5, 6, 9}), frozenset({1, 6, 7, 9}), frozenset({1, 7, 8, 9}),
        frozenset({4, 5, 6, 9}), frozenset({4, 6, 7, 9}), frozenset({4, 7, 8, 9}),
    }
    facets -= {frozenset({1, 4} | set(e2)) for e2 in c2}
    return FacetComplex(tuple(range(1, 10)),
                        tuple(sorted(tuple(sorted(F)) for F in facets)))


def obs_a3_vertex_bijection() -> dict[int, int]:
    """0-based positions of the obstruction word to ground-set labels 1..9,
    left to right, skipping the unique letter 3."""
    positions = [p for p, a in enumerate(OBS_A3_WORD) if a != 3]
    return {p: v for v, p in enumerate(positions, start=1)}
