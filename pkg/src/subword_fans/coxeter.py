"""Type-A Coxeter machinery on permutations: words in the simple
transpositions, reduced expressions and their braid graph, the sign function
on reduced words of the longest element, roots, and parabolic restrictions.

Permutations of {1..n+1} are stored in one-line notation as tuples, and a
word is a tuple of generator indices in 1..n.  A small dihedral system is
included for the rank-2 folding of the bipartite A3 construction.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from typing import Iterator, Sequence

Word = tuple[int, ...]
Perm = tuple[int, ...]

__all__ = [
    "TypeA",
    "B2",
    "BraidGraph",
    "identity",
    "apply_gen",
    "evaluate",
    "length",
    "longest_element",
    "is_reduced",
    "first_reduced_word",
    "enumerate_reduced_words",
    "braid_moves",
    "braid_graph",
    "contracted_bipartite",
    "cycle_basis_parities",
    "stabled_classes",
    "is_stabled",
    "sign_w0",
    "flip_sign_consistency",
    "inversion_sequence",
    "positive_roots",
    "root_support",
    "is_positive_root",
    "parabolic_data",
    "is_coxeter_word",
    "sorted_word_w0",
]


def identity(n: int) -> Perm:
    return tuple(range(1, n + 2))


def apply_gen(perm: Perm, i: int) -> Perm:
    """Right-multiply by s_i: swap the values at positions i, i+1."""
    p = list(perm)
    p[i - 1], p[i] = p[i], p[i - 1]
    return tuple(p)


def length(perm: Perm) -> int:
    """Coxeter length = number of inversions."""
    n = len(perm)
    inv = 0
    for i in range(n):
        pi = perm[i]
        for j in range(i + 1, n):
            if pi > perm[j]:
                inv += 1
    return inv


def evaluate(n: int, word: Sequence[int]) -> Perm:
    """Product of the simple transpositions of ``word``, left to right."""
    p = identity(n)
    for i in word:
        if not 1 <= i <= n:
            raise ValueError(f"letter {i} out of range for rank {n}")
        p = apply_gen(p, i)
    return p


def longest_element(n: int) -> Perm:
    return tuple(range(n + 1, 0, -1))


def is_reduced(n: int, word: Sequence[int]) -> bool:
    return length(evaluate(n, word)) == len(word)


def first_reduced_word(n: int, perm: Perm) -> Word:
    """One reduced word, by repeatedly removing the first right descent."""
    word = []
    p = perm
    while True:
        d = next((i for i in range(1, n + 1) if p[i - 1] > p[i]), None)
        if d is None:
            break
        p = apply_gen(p, d)
        word.append(d)
    return tuple(reversed(word))


def braid_moves(n: int, word: Word) -> Iterator[tuple[Word, tuple[int, int]]]:
    """All single braid-relation rewrites of ``word`` with their {i, j} label."""
    for k in range(len(word) - 1):
        a, b = word[k], word[k + 1]
        if abs(a - b) >= 2:
            yield word[:k] + (b, a) + word[k + 2:], (min(a, b), max(a, b))
        elif abs(a - b) == 1 and k + 2 < len(word) and word[k + 2] == a:
            yield word[:k] + (b, a, b) + word[k + 3:], (min(a, b), max(a, b))


def enumerate_reduced_words(n: int, perm: Perm) -> frozenset[Word]:
    """All reduced expressions of ``perm``: BFS over braid moves from a seed."""
    seed = first_reduced_word(n, perm)
    seen = {seed}
    queue = deque([seed])
    while queue:
        w = queue.popleft()
        for w2, _ in braid_moves(n, w):
            if w2 not in seen:
                seen.add(w2)
                queue.append(w2)
    return frozenset(seen)


@dataclass(frozen=True)
class BraidGraph:
    """Graph of reduced expressions connected by single braid relations."""

    vertices: tuple[Word, ...]
    edges: tuple[tuple[int, int, tuple[int, int]], ...]  # (u, v, {i,j} label)

    def index(self, word: Word) -> int:
        return self.vertices.index(word)

    def adjacency(self) -> list[list[tuple[int, tuple[int, int]]]]:
        adj: list[list[tuple[int, tuple[int, int]]]] = [[] for _ in self.vertices]
        for u, v, lab in self.edges:
            adj[u].append((v, lab))
            adj[v].append((u, lab))
        return adj

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        adj = self.adjacency()
        seen = {0}
        stack = [0]
        while stack:
            u = stack.pop()
            for v, _ in adj[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return len(seen) == len(self.vertices)

    def to_json(self) -> str:
        return json.dumps({
            "vertices": ["".join(map(str, w)) for w in self.vertices],
            "edges": [[u, v, list(lab)] for u, v, lab in self.edges],
        }, sort_keys=True)

    def to_dot(self) -> str:
        lines = ["graph braid {"]
        for i, w in enumerate(self.vertices):
            lines.append(f'  v{i} [label="{"".join(map(str, w))}"];')
        for u, v, (i, j) in self.edges:
            lines.append(f'  v{u} -- v{v} [label="{{{i},{j}}}"];')
        lines.append("}")
        return "\n".join(lines)


def braid_graph(n: int, perm: Perm) -> BraidGraph:
    words = sorted(enumerate_reduced_words(n, perm))
    index = {w: i for i, w in enumerate(words)}
    edges = set()
    for w in words:
        for w2, lab in braid_moves(n, w):
            u, v = index[w], index[w2]
            if u < v:
                edges.add((u, v, lab))
    return BraidGraph(tuple(words), tuple(sorted(edges)))


def cycle_basis_parities(graph: BraidGraph) -> list[tuple[int, int, int]]:
    """Per fundamental cycle of a spanning forest: (total edge count, number
    of even-braid edges, number of odd-braid edges).

    Edge-count parities are additive over the cycle space, so checking a
    basis checks every cycle of the graph.
    """
    nverts = len(graph.vertices)
    adj: list[list[tuple[int, int]]] = [[] for _ in range(nverts)]
    for e, (u, v, _lab) in enumerate(graph.edges):
        adj[u].append((v, e))
        adj[v].append((u, e))
    depth = [-1] * nverts
    parent_edge = [-1] * nverts
    parent = [-1] * nverts
    tree_edges: set[int] = set()
    for root in range(nverts):
        if depth[root] >= 0:
            continue
        depth[root] = 0
        stack = [root]
        while stack:
            u = stack.pop()
            for v, e in adj[u]:
                if depth[v] < 0:
                    depth[v] = depth[u] + 1
                    parent[v] = u
                    parent_edge[v] = e
                    tree_edges.add(e)
                    stack.append(v)

    def is_odd(e: int) -> bool:
        i, j = graph.edges[e][2]
        return abs(i - j) == 1

    out = []
    for e, (u, v, _lab) in enumerate(graph.edges):
        if e in tree_edges:
            continue
        cycle_edges = [e]
        a, b = u, v
        while a != b:
            if depth[a] < depth[b]:
                a, b = b, a
            cycle_edges.append(parent_edge[a])
            a = parent[a]
        odd = sum(1 for ce in cycle_edges if is_odd(ce))
        out.append((len(cycle_edges), len(cycle_edges) - odd, odd))
    return out


def stabled_classes(n: int) -> tuple[frozenset[tuple[int, int]], frozenset[tuple[int, int]]]:
    """The two conjugation classes of generator pairs in type A.

    Returns (odd, even): odd braid relations m=3 are the adjacent pairs,
    even ones m=2 the non-adjacent pairs.  Valid stabled sets are unions
    of these classes.
    """
    odd = frozenset((i, i + 1) for i in range(1, n))
    even = frozenset((i, j) for i in range(1, n + 1) for j in range(i + 2, n + 1))
    return odd, even


def is_stabled(n: int, Z: set[tuple[int, int]]) -> bool:
    odd, even = stabled_classes(n)
    zf = frozenset(tuple(sorted(p)) for p in Z)
    return zf in (frozenset(), odd, even, odd | even)


def contracted_bipartite(graph: BraidGraph, Z: set[tuple[int, int]]
                         ) -> tuple[bool, list[int] | None]:
    """Contract all edges labeled outside Z, then try to 2-color.

    Returns (True, None) when the contracted graph is bipartite, otherwise
    (False, cycle) with an odd cycle given as vertex indices of the original
    graph (its surviving edges all carry labels in Z).
    """
    zf = {tuple(sorted(p)) for p in Z}
    nverts = len(graph.vertices)
    parent = list(range(nverts))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v, lab in graph.edges:
        if lab not in zf:
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv

    adj: dict[int, list[tuple[int, int]]] = {}
    for u, v, lab in graph.edges:
        if lab in zf:
            ru, rv = find(u), find(v)
            adj.setdefault(ru, []).append((rv, u))
            adj.setdefault(rv, []).append((ru, v))

    color: dict[int, int] = {}
    pred: dict[int, tuple[int, int]] = {}
    for root in sorted({find(v) for v in range(nverts)}):
        if root in color:
            continue
        color[root] = 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for v, orig_u in adj.get(u, ()):  # orig_u: original endpoint on u's side
                if v not in color:
                    color[v] = 1 - color[u]
                    pred[v] = (u, orig_u)
                    queue.append(v)
                elif color[v] == color[u]:
                    # Odd cycle: walk both predecessor chains to the root.
                    def chain(x: int) -> list[int]:
                        out = [x]
                        while x in pred:
                            x = pred[x][0]
                            out.append(x)
                        return out
                    cu, cv = chain(u), chain(v)
                    shared = set(cu) & set(cv)
                    cut_u = next(i for i, x in enumerate(cu) if x in shared)
                    cut_v = next(i for i, x in enumerate(cv) if x in shared)
                    cycle = cu[:cut_u + 1] + list(reversed(cv[:cut_v]))
                    return False, cycle
    return True, None


# ---------------------------------------------------------------------------
# Roots and parabolic restrictions
# ---------------------------------------------------------------------------

Root = tuple[int, ...]


def positive_roots(n: int) -> list[Root]:
    """Positive roots alpha_i + ... + alpha_j as 0/1 coefficient vectors."""
    roots = []
    for i in range(n):
        for j in range(i, n):
            roots.append(tuple(1 if i <= k <= j else 0 for k in range(n)))
    return roots


def is_positive_root(n: int, root: Root) -> bool:
    return root in set(positive_roots(n))


def root_support(root: Root) -> tuple[int, ...]:
    return tuple(i + 1 for i, c in enumerate(root) if c != 0)


def parabolic_data(root: Root, c: Word) -> tuple[tuple[int, ...], Word]:
    """Support generators of a positive root and the restriction of c to them."""
    n = len(root)
    if not is_positive_root(n, root):
        raise ValueError(f"{root} is not a positive root of rank {n}")
    support = root_support(root)
    c_alpha = tuple(i for i in c if i in support)
    return support, c_alpha


def reflect(n: int, perm: Perm, root: Root) -> Root:
    """Image of a root under the permutation action on the root space.

    alpha_i maps to e_i - e_{i+1}; a permutation w acts by permuting
    coordinates, w(e_i) = e_{w(i)}.
    """
    coords = [0] * (n + 1)
    for i, ci in enumerate(root):
        coords[i] += ci
        coords[i + 1] -= ci
    image = [0] * (n + 1)
    for i in range(n + 1):
        image[perm[i] - 1] += coords[i]
    out = []
    acc = 0
    for i in range(n):
        acc += image[i]
        out.append(acc)
    return tuple(out)


def inversion_sequence(n: int, word: Sequence[int]) -> list[Root]:
    """Roots beta_k = w_1...w_{k-1}(alpha_{w_k}) of a reduced word."""
    seq = []
    p = identity(n)
    for i in word:
        alpha = tuple(1 if k == i - 1 else 0 for k in range(n))
        seq.append(reflect(n, p, alpha))
        p = apply_gen(p, i)
    return seq


# ---------------------------------------------------------------------------
# The sign function on reduced expressions of the longest element
# ---------------------------------------------------------------------------

def sign_w0(n: int, word: Sequence[int]) -> int:
    """Sign of a reduced word of the longest element.

    The inversions t_k = w_1...w_k...w_1 are transpositions (i_k, j_k); the
    sequence min(i_k, j_k) is a multi-permutation of 1^n 2^(n-1) ... n, and
    the sign is -1 to its inversion count.  This pins down the global
    orientation left free by the braid-move recurrence, with commutations
    flipping the sign and long braid moves preserving it.
    """
    word = tuple(word)
    N = n * (n + 1) // 2
    if len(word) != N or evaluate(n, word) != longest_element(n):
        raise ValueError("sign is defined for reduced words of the longest element")
    labels = []
    p = identity(n)
    for i in word:
        # t_k = p s_i p^{-1} swaps the values p(i), p(i+1).
        a, b = p[i - 1], p[i]
        labels.append(min(a, b))
        p = apply_gen(p, i)
    inv = sum(1 for i in range(N) for j in range(i + 1, N) if labels[i] > labels[j])
    return -1 if inv % 2 else 1


def flip_sign_consistency(n: int, w: Word, w2: Word, i: int, j: int) -> bool:
    """Check sign(w2) = (-1)^(i-j) sign(w) for a flip w \\ w_i = w2 \\ w2_j.

    Positions i, j are 1-based.  Raises if the flip precondition fails.
    """
    if w[:i - 1] + w[i:] != w2[:j - 1] + w2[j:]:
        raise ValueError("not a flip: deleting the given positions disagrees")
    lhs = sign_w0(n, w2)
    rhs = (-1) ** (i - j) * sign_w0(n, w)
    return lhs == rhs


# ---------------------------------------------------------------------------
# Coxeter elements and sorting words
# ---------------------------------------------------------------------------

def is_coxeter_word(n: int, c: Sequence[int]) -> bool:
    return sorted(c) == list(range(1, n + 1))


def sorted_word_w0(n: int, c: Sequence[int]) -> Word:
    """Lexicographically first reduced word of w0 inside c^infinity (greedy)."""
    if not is_coxeter_word(n, c):
        raise ValueError(f"{c} is not a Coxeter element word of rank {n}")
    N = n * (n + 1) // 2
    word: list[int] = []
    p = identity(n)
    ell = 0
    while ell < N:
        for i in c:
            q = apply_gen(p, i)
            if length(q) == ell + 1:
                p = q
                ell += 1
                word.append(i)
                if ell == N:
                    break
    return tuple(word)


# ---------------------------------------------------------------------------
# Coxeter systems as small interface objects (type A, and B2 for folding)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TypeA:
    """Symmetric group S_{rank+1} with its simple transpositions."""

    rank: int

    @property
    def num_generators(self) -> int:
        return self.rank

    @property
    def longest_length(self) -> int:
        return self.rank * (self.rank + 1) // 2

    def identity(self):
        return identity(self.rank)

    def longest(self):
        return longest_element(self.rank)

    def apply(self, el, i: int):
        return apply_gen(el, i)

    def length(self, el) -> int:
        return length(el)

    def evaluate(self, word: Sequence[int]):
        return evaluate(self.rank, word)

    def sign_w0(self, word: Sequence[int]) -> int:
        return sign_w0(self.rank, word)

    def reduced_words_w0(self) -> frozenset[Word]:
        return enumerate_reduced_words(self.rank, self.longest())


@dataclass(frozen=True)
class B2:
    """Dihedral system of order 8 (m_12 = 4), used by the rank-2 folding.

    Elements are canonical alternating words starting with the smaller
    possible letter; w0 = 1212 = 2121.
    """

    rank: int = 2
    order: int = 4  # m_12

    @property
    def num_generators(self) -> int:
        return 2

    @property
    def longest_length(self) -> int:
        return self.order

    def identity(self):
        return ()

    def longest(self):
        return tuple(1 if k % 2 == 0 else 2 for k in range(self.order))

    def _canonical(self, word: tuple[int, ...]) -> tuple[int, ...]:
        if len(word) == self.order and word[0] == 2:
            return self.longest()
        return word

    def apply(self, el, i: int):
        if el and el[-1] == i:
            return self._canonical(el[:-1])
        if len(el) == self.order:  # w0: left-multiplying shortens
            start = 2 if i == 1 else 1
            return tuple(start if k % 2 == 0 else 3 - start for k in range(self.order - 1))
        return self._canonical(el + (i,))

    def length(self, el) -> int:
        return len(el)

    def evaluate(self, word: Sequence[int]):
        el = self.identity()
        for i in word:
            if i not in (1, 2):
                raise ValueError(f"letter {i} out of range for B2")
            el = self.apply(el, i)
        return el

    def sign_w0(self, word: Sequence[int]) -> int:
        word = tuple(word)
        if self.evaluate(word) != self.longest() or len(word) != self.order:
            raise ValueError("sign is defined for reduced words of the longest element")
        # Anchor: the c-sorting word 1212 gets +1, as in type A where
        # sign(w0(c)) = +1; the single m=4 braid move flips by (-1)^3.
        return 1 if word[0] == 1 else -1
