"""Independent correctness oracles and structural checkers.

Everything here is deliberately implemented without reusing solver
internals: matchings are recomputed by classical augmenting-path algorithms,
and the structural conditions are evaluated through explicit level-set
containment rather than the solver's arithmetic shortcuts. A disagreement
between this module and the solver always indicates a bug.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .auction import AuctionState
from .graph import BipartiteGraph

__all__ = [
    "InvalidMatchingError",
    "LevelSets",
    "Matching",
    "check_level_lemma",
    "check_path_length_lemma",
    "hopcroft_karp",
    "shortest_augmenting_path",
    "simple_max_matching",
]

_INF = float("inf")


class InvalidMatchingError(ValueError):
    """A pair set that is not a matching on the given graph."""


@dataclass(frozen=True)
class Matching:
    """An injective set of (left, right) pairs."""

    pairs: frozenset[tuple[int, int]]

    def __post_init__(self) -> None:
        lefts = {u for u, _ in self.pairs}
        rights = {v for _, v in self.pairs}
        if len(lefts) != len(self.pairs) or len(rights) != len(self.pairs):
            raise InvalidMatchingError("a vertex appears in more than one pair")

    @classmethod
    def from_pairs(cls, pairs) -> "Matching":
        return cls(frozenset((int(u), int(v)) for u, v in pairs))

    @classmethod
    def from_dict(cls, left_to_right: dict[int, int]) -> "Matching":
        return cls.from_pairs(left_to_right.items())

    @property
    def cardinality(self) -> int:
        return len(self.pairs)

    def left_map(self) -> dict[int, int]:
        return {u: v for u, v in self.pairs}

    def right_map(self) -> dict[int, int]:
        return {v: u for u, v in self.pairs}


@dataclass(frozen=True)
class LevelSets:
    """Nested right-vertex sets: ``at(l)`` holds every v whose level is >= l."""

    d: dict[int, frozenset[int]]

    @classmethod
    def from_levels(cls, levels) -> "LevelSets":
        arr = np.asarray(levels, dtype=np.int64)
        top = int(arr.max(initial=0))
        return cls({l: frozenset(np.flatnonzero(arr >= l).tolist()) for l in range(top + 1)})

    def at(self, l: int) -> frozenset[int]:
        """The set at level l; full vertex set for l <= 0, empty above the top."""
        if l <= 0:
            return self.d[0]
        return self.d.get(l, frozenset())

    def is_nested(self) -> bool:
        ordered = sorted(self.d)
        return all(self.d[b] <= self.d[a] for a, b in zip(ordered, ordered[1:]))


def hopcroft_karp(g: BipartiteGraph) -> Matching:
    """Maximum-cardinality matching via layered phases of shortest augmentations.

    Deterministic: BFS and DFS visit vertices in ascending index order, so
    repeated calls on equal graphs return the same matching, not merely the
    same cardinality.
    """
    n = g.n
    indptr, indices = g.csr_u()
    match_u = [-1] * n
    match_v = [-1] * n
    # Index n is the sentinel standing for "free right vertex"; its distance
    # is the current shortest augmenting path length (in matched-edge hops).
    dist = [_INF] * (n + 1)

    def bfs() -> bool:
        q = deque()
        for u in range(n):
            if match_u[u] == -1 and indptr[u + 1] > indptr[u]:
                dist[u] = 0
                q.append(u)
            else:
                dist[u] = _INF
        dist[n] = _INF
        while q:
            u = q.popleft()
            if dist[u] >= dist[n]:
                continue
            for k in range(indptr[u], indptr[u + 1]):
                w = match_v[indices[k]]
                t = w if w != -1 else n
                if dist[t] == _INF:
                    dist[t] = dist[u] + 1
                    if t != n:
                        q.append(t)
        return dist[n] != _INF

    def try_augment(root: int) -> bool:
        # Iterative DFS along the BFS layers. trail[i] is the right vertex
        # chosen at depth i; len(trail) == len(stack) - 1 between iterations.
        stack = [root]
        ptr = [int(indptr[root])]
        trail: list[int] = []
        while stack:
            u = stack[-1]
            advanced = False
            while ptr[-1] < indptr[u + 1]:
                v = int(indices[ptr[-1]])
                ptr[-1] += 1
                w = match_v[v]
                t = w if w != -1 else n
                if dist[t] == dist[u] + 1:
                    if w == -1:
                        trail.append(v)
                        for uu, vv in zip(stack, trail):
                            match_u[uu] = vv
                            match_v[vv] = uu
                        return True
                    trail.append(v)
                    stack.append(w)
                    ptr.append(int(indptr[w]))
                    advanced = True
                    break
            if not advanced:
                dist[u] = _INF
                stack.pop()
                ptr.pop()
                if trail:
                    trail.pop()
        return False

    while bfs():
        for u in range(n):
            if match_u[u] == -1 and indptr[u + 1] > indptr[u]:
                try_augment(u)
    return Matching.from_pairs((u, match_u[u]) for u in range(n) if match_u[u] != -1)


def simple_max_matching(g: BipartiteGraph) -> Matching:
    """Single-augmenting-path maximum matcher, the cross-check for hopcroft_karp.

    Classical recursive augmentation, one left vertex at a time in ascending
    order. O(V*E); intended for modest test instances only (recursion depth
    is bounded by n).
    """
    n = g.n
    match_u = [-1] * n
    match_v = [-1] * n

    def augment(u: int, visited: set[int]) -> bool:
        for v in g.neighbors_u(u):
            v = int(v)
            if v in visited:
                continue
            visited.add(v)
            if match_v[v] == -1 or augment(match_v[v], visited):
                match_u[u] = v
                match_v[v] = u
                return True
        return False

    for u in range(n):
        augment(u, set())
    return Matching.from_pairs((u, match_u[u]) for u in range(n) if match_u[u] != -1)


def _alternating_bfs(g: BipartiteGraph, right_map: dict[int, int], sources) -> int | None:
    """Length of the shortest augmenting path starting from ``sources``.

    Paths alternate non-matching / matching edges; a path that reaches an
    unmatched right vertex after d matched-edge hops has 2d+1 edges. Returns
    None when no augmenting path exists from any source.
    """
    dist = {int(u): 0 for u in sources}
    q = deque(dist)
    while q:
        u = q.popleft()
        d = dist[u]
        for v in g.neighbors_u(u):
            v = int(v)
            w = right_map.get(v)
            if w is None:
                return 2 * d + 1
            if w not in dist:
                dist[w] = d + 1
                q.append(w)
    return None


def shortest_augmenting_path(g: BipartiteGraph, m: Matching) -> int | None:
    """Shortest augmenting path length for ``m`` on ``g``, or None if ``m`` is maximum.

    Raises:
        InvalidMatchingError: if ``m`` uses a pair that is not an edge of ``g``
            (injectivity is already guaranteed by the Matching type).
    """
    for u, v in m.pairs:
        if not (0 <= u < g.n and 0 <= v < g.n) or not g.has_edge(u, v):
            raise InvalidMatchingError(f"pair ({u}, {v}) is not an edge of the graph")
    left_map = m.left_map()
    sources = [u for u in range(g.n) if u not in left_map]
    return _alternating_bfs(g, m.right_map(), sources)


def check_level_lemma(state: AuctionState) -> bool:
    """Neighborhood containment: matched u's neighbors all sit one level below its partner.

    For each matched pair (u, v0) with l = level(v0), checks that
    ``neighbors(u)`` is a subset of ``at(l-1)`` by explicit set containment.
    True for every state the solver can reach; constructed states may fail.
    """
    sets = LevelSets.from_levels(state.levels)
    for u, v0 in state.matching.items():
        target = sets.at(int(state.levels[v0]) - 1)
        neighborhood = {int(v) for v in state.graph.neighbors_u(u)}
        if not neighborhood <= target:
            return False
    return True


def check_path_length_lemma(g: BipartiteGraph, state: AuctionState) -> bool:
    """Every free vertex whose whole neighborhood sits at level >= l needs 2l+1 edges to augment.

    For each free matchable u, l is the largest level set containing all of
    ``neighbors(u)``; the shortest augmenting path from u (recomputed by
    alternating BFS, independent of solver internals) must have at least
    2l+1 edges. Vacuously true when u has no augmenting path.
    """
    right_map = dict(state.reverse_matching)
    for u in state.free_queue:
        row = g.neighbors_u(u)
        l = int(state.levels[row].min())
        length = _alternating_bfs(g, right_map, [u])
        if length is not None and length < 2 * l + 1:
            return False
    return True
