"""Bipartite graphs: representation, random generation, sparsification, text I/O.

Graphs are balanced (``n`` vertices per side, indexed ``0..n-1``) and stored in
CSR form with sorted, duplicate-free neighbor lists on both sides. Sorted
adjacency makes index-based tie-breaking in the solvers reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "MAX_SEED",
    "BipartiteGraph",
    "GraphGenSpec",
    "DuplicateEdgeError",
    "EmptyGraphError",
    "IndexOutOfRangeError",
    "ParseError",
    "generate_bnp",
    "read_graph",
    "sparsify",
    "write_graph",
]

MAX_SEED = 2**64 - 1


class ParseError(ValueError):
    """A graph file that cannot be interpreted. Carries the 1-based line number."""

    def __init__(self, message: str, line_no: int | None = None):
        self.line_no = line_no
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)


class DuplicateEdgeError(ParseError):
    """The same edge appears more than once in a graph file."""


class IndexOutOfRangeError(ParseError):
    """An edge endpoint lies outside ``[0, n)``."""


class EmptyGraphError(ValueError):
    """The operation requires a graph with at least one edge."""


class BipartiteGraph:
    """Balanced bipartite graph ``G = (U, V, E)`` with ``|U| = |V| = n``.

    Instances are immutable after construction and safe to share read-only
    across threads. Left-side adjacency is the authoritative edge set; the
    right-side adjacency is derived from it.
    """

    __slots__ = ("n", "_indptr_u", "_indices_u", "_indptr_v", "_indices_v")

    def __init__(self, n: int, adjacency_u) -> None:
        """Build a graph from per-left-vertex neighbor lists.

        Args:
            n: number of vertices on each side, at least 1.
            adjacency_u: sequence of ``n`` neighbor lists; each list must be
                strictly ascending with entries in ``[0, n)``.

        Raises:
            ValueError: on malformed sizes, out-of-range neighbors, or
                unsorted/duplicated neighbor lists.
        """
        if n < 1:
            raise ValueError(f"n must be >= 1, got {n}")
        if len(adjacency_u) != n:
            raise ValueError(f"expected {n} neighbor lists, got {len(adjacency_u)}")
        rows = [np.asarray(row, dtype=np.int64).reshape(-1) for row in adjacency_u]
        for u, row in enumerate(rows):
            if row.size == 0:
                continue
            if row[0] < 0 or row[-1] >= n:
                raise ValueError(f"vertex {u}: neighbor index out of range [0, {n})")
            if row.size > 1 and not np.all(np.diff(row) > 0):
                raise ValueError(f"vertex {u}: neighbors must be sorted ascending and duplicate-free")
        counts = np.array([row.size for row in rows], dtype=np.int64)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(counts, out=indptr[1:])
        indices = np.concatenate(rows) if counts.sum() else np.empty(0, dtype=np.int64)
        self._init_from_csr(n, indptr, indices)

    @classmethod
    def _from_csr(cls, n: int, indptr: np.ndarray, indices: np.ndarray) -> "BipartiteGraph":
        # Trusted fast path for internally generated (already valid) data.
        self = object.__new__(cls)
        self._init_from_csr(n, indptr, indices)
        return self

    def _init_from_csr(self, n: int, indptr: np.ndarray, indices: np.ndarray) -> None:
        self.n = n
        self._indptr_u = indptr
        self._indices_u = indices
        degrees = np.diff(indptr)
        row_ids = np.repeat(np.arange(n, dtype=np.int64), degrees)
        order = np.argsort(indices, kind="stable")
        self._indices_v = row_ids[order]
        indptr_v = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(indices, minlength=n), out=indptr_v[1:])
        self._indptr_v = indptr_v
        for arr in (self._indptr_u, self._indices_u, self._indptr_v, self._indices_v):
            arr.flags.writeable = False

    @classmethod
    def from_edges(cls, n: int, edges) -> "BipartiteGraph":
        """Build a graph from an iterable of ``(u, v)`` pairs (any order)."""
        rows: list[list[int]] = [[] for _ in range(n)]
        seen = set()
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if (u, v) in seen:
                raise ValueError(f"duplicate edge ({u}, {v})")
            seen.add((u, v))
            rows[u].append(v)
        return cls(n, [sorted(r) for r in rows])

    @property
    def edge_count(self) -> int:
        return int(self._indices_u.size)

    @property
    def adjacency_u(self) -> list[np.ndarray]:
        """Per-left-vertex neighbor arrays (read-only views)."""
        return [self.neighbors_u(u) for u in range(self.n)]

    @property
    def adjacency_v(self) -> list[np.ndarray]:
        """Per-right-vertex neighbor arrays, derived from the left adjacency."""
        return [self.neighbors_v(v) for v in range(self.n)]

    def neighbors_u(self, u: int) -> np.ndarray:
        return self._indices_u[self._indptr_u[u] : self._indptr_u[u + 1]]

    def neighbors_v(self, v: int) -> np.ndarray:
        return self._indices_v[self._indptr_v[v] : self._indptr_v[v + 1]]

    def degrees_u(self) -> np.ndarray:
        return np.diff(self._indptr_u)

    def csr_u(self) -> tuple[np.ndarray, np.ndarray]:
        """Left-side CSR arrays ``(indptr, indices)`` for the solver kernels."""
        return self._indptr_u, self._indices_u

    def edge_array(self) -> np.ndarray:
        """All edges as an ``(E, 2)`` array in row-major ``(u, v)`` order."""
        degrees = np.diff(self._indptr_u)
        row_ids = np.repeat(np.arange(self.n, dtype=np.int64), degrees)
        return np.column_stack([row_ids, self._indices_u])

    def has_edge(self, u: int, v: int) -> bool:
        row = self.neighbors_u(u)
        i = np.searchsorted(row, v)
        return bool(i < row.size and row[i] == v)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BipartiteGraph):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self._indptr_u, other._indptr_u)
            and np.array_equal(self._indices_u, other._indices_u)
        )

    def __hash__(self) -> int:
        return hash((self.n, self._indices_u.tobytes(), self._indptr_u.tobytes()))

    def __repr__(self) -> str:
        return f"BipartiteGraph(n={self.n}, edges={self.edge_count})"


@dataclass(frozen=True)
class GraphGenSpec:
    """Parameters of the random model: each of the n*n edges present with probability p."""

    n: int
    p: float
    seed: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if not (0.0 <= self.p <= 1.0):
            raise ValueError(f"p must lie in [0, 1], got {self.p}")
        if not (0 <= self.seed <= MAX_SEED):
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")


def generate_bnp(spec: GraphGenSpec) -> BipartiteGraph:
    """Sample a random balanced bipartite graph from the given spec.

    Each potential edge ``(u, v)`` is included independently with probability
    ``spec.p``, consuming exactly one PRNG draw per potential edge in
    row-major (u, then v) order. Identical specs produce bit-identical graphs.
    """
    n = spec.n
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    rows = []
    counts = np.empty(n, dtype=np.int64)
    for u in range(n):
        row = np.flatnonzero(rng.random(n) < spec.p)
        rows.append(row)
        counts[u] = row.size
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    indices = np.concatenate(rows).astype(np.int64) if counts.sum() else np.empty(0, dtype=np.int64)
    return BipartiteGraph._from_csr(n, indptr, indices)


def sparsify(g: BipartiteGraph, c: float, seed: int, p: float | None = None) -> BipartiteGraph:
    """Randomly thin a dense graph down to the ``c*log(n)/n`` density regime.

    Each edge of ``g`` is retained independently with probability
    ``q = c*log(n) / (n*p_hat)``, so the retained-edge count is Binomial(E, q).
    Draws consume one PRNG value per edge in row-major edge order.

    Args:
        g: input graph; must have at least one edge.
        c: non-negative density coefficient (the target density is c*log(n)/n).
        seed: 64-bit unsigned PRNG seed.
        p: the model edge probability, if known by the caller. Defaults to the
            empirical estimate ``edge_count / n**2``.

    Returns:
        A graph on the same vertex sets with a random edge subset; ``g``
        itself when the retention probability reaches 1.

    Raises:
        EmptyGraphError: if ``g`` has no edges.
        ValueError: on negative ``c``, an invalid ``p``, or a bad seed.
    """
    if g.edge_count == 0:
        raise EmptyGraphError("cannot sparsify a graph with no edges")
    if c < 0:
        raise ValueError(f"c must be non-negative, got {c}")
    if not (0 <= seed <= MAX_SEED):
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    if p is not None and not (0.0 < p <= 1.0):
        raise ValueError(f"p must lie in (0, 1], got {p}")
    n = g.n
    p_hat = p if p is not None else g.edge_count / (n * n)
    q = c * math.log(n) / (n * p_hat)
    if q >= 1.0:
        return g
    rng = np.random.Generator(np.random.PCG64(seed))
    indptr, indices = g.csr_u()
    keep = rng.random(indices.size) < q
    degrees = np.diff(indptr)
    row_ids = np.repeat(np.arange(n, dtype=np.int64), degrees)
    new_counts = np.bincount(row_ids[keep], minlength=n)
    new_indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(new_counts, out=new_indptr[1:])
    return BipartiteGraph._from_csr(n, new_indptr, indices[keep].copy())


def write_graph(g: BipartiteGraph, path) -> None:
    """Write ``g`` in the line-oriented text format (ASCII, LF line endings).

    Header ``bmcm <n> <edge_count>``, then one ``<u> <v>`` line per edge in
    row-major order.
    """
    edges = g.edge_array()
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(f"bmcm {g.n} {g.edge_count}\n")
        fh.writelines(f"{u} {v}\n" for u, v in edges)


def read_graph(path) -> BipartiteGraph:
    """Parse a graph file written in the ``bmcm`` text format.

    Lines starting with ``#`` and blank lines are ignored. Edges may appear
    in any order; ``read_graph(write_graph(g)) == g``.

    Raises:
        ParseError: malformed header, token, or edge-count mismatch.
        IndexOutOfRangeError: edge endpoint outside ``[0, n)``.
        DuplicateEdgeError: repeated edge line.
    """
    n = -1
    edge_count = -1
    seen: set[tuple[int, int]] = set()
    rows: list[list[int]] = []
    with open(path, "r", encoding="ascii") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            tokens = line.split()
            if n < 0:
                if len(tokens) != 3 or tokens[0] != "bmcm":
                    raise ParseError("expected header 'bmcm <n> <edge_count>'", line_no)
                try:
                    n, edge_count = int(tokens[1]), int(tokens[2])
                except ValueError:
                    raise ParseError("header fields must be integers", line_no) from None
                if n < 1 or edge_count < 0:
                    raise ParseError("header requires n >= 1 and edge_count >= 0", line_no)
                rows = [[] for _ in range(n)]
                continue
            if len(seen) == edge_count:
                raise ParseError(f"more edge lines than the declared {edge_count}", line_no)
            if len(tokens) != 2:
                raise ParseError("expected an edge line '<u> <v>'", line_no)
            try:
                u, v = int(tokens[0]), int(tokens[1])
            except ValueError:
                raise ParseError("edge endpoints must be integers", line_no) from None
            if not (0 <= u < n and 0 <= v < n):
                raise IndexOutOfRangeError(f"edge ({u}, {v}) outside [0, {n})", line_no)
            if (u, v) in seen:
                raise DuplicateEdgeError(f"edge ({u}, {v}) repeated", line_no)
            seen.add((u, v))
            rows[u].append(v)
    if n < 0:
        raise ParseError("missing header line")
    if len(seen) != edge_count:
        raise ParseError(f"declared {edge_count} edges but found {len(seen)}")
    return BipartiteGraph(n, [sorted(r) for r in rows])
