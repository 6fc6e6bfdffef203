"""Auction solver for bipartite maximum-cardinality matching.

Free left vertices bid for their lowest-level neighbor; the chosen right
vertex's level rises by one and any previous owner is evicted back into the
free queue. The run stops at a perfect matching, at the ``n*(n-1)`` cap on
the total level mass, or when no free matchable vertex remains.

Two entry points: `run` solves a graph outright (dispatching to the
compiled kernel when possible), while `init_state` / `bid_step` expose the
same process one bid at a time for tracing and invariant checks.
"""

from __future__ import annotations

import enum
import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from . import _backend
from .graph import BipartiteGraph

__all__ = [
    "AuctionState",
    "CapExceededError",
    "DomainError",
    "MatchResult",
    "NoFreeVertexError",
    "SelectionPolicy",
    "StepReport",
    "Termination",
    "bid_step",
    "check_eps_cs",
    "init_state",
    "iteration_bound",
    "run",
]


class Termination(enum.Enum):
    """Why a run stopped. Values are the wire-format strings."""

    PERFECT = "Perfect"
    LEVEL_CAP_REACHED = "LevelCapReached"
    NO_FREE_MATCHABLE = "NoFreeMatchable"


_CODE_TO_TERMINATION = {
    _backend.PERFECT: Termination.PERFECT,
    _backend.LEVEL_CAP: Termination.LEVEL_CAP_REACHED,
    _backend.NO_FREE: Termination.NO_FREE_MATCHABLE,
}


class SelectionPolicy(enum.Enum):
    """How the next free vertex is drawn from the queue."""

    FIFO = "fifo"
    LIFO = "lifo"
    RANDOM = "random"


class NoFreeVertexError(RuntimeError):
    """bid_step was called with an empty free queue."""


class CapExceededError(RuntimeError):
    """bid_step was called after the total-level cap was already reached."""


class DomainError(ValueError):
    """A bound formula was evaluated outside its domain of validity."""


@dataclass(frozen=True)
class StepReport:
    """Record of one bid: who bid, where, whom it displaced, and the new level."""

    u: int
    j: int
    evicted: int | None
    level_j: int
    iteration: int

    def to_json_dict(self) -> dict:
        return {
            "u": self.u,
            "j": self.j,
            "evicted": self.evicted,
            "h_j": self.level_j,
            "iteration": self.iteration,
        }


@dataclass(frozen=True)
class MatchResult:
    """Outcome of a full run.

    ``iterations`` always equals ``sum(levels)``; ``termination`` is PERFECT
    exactly when every left vertex is matched.
    """

    matching: dict[int, int]
    levels: tuple[int, ...]
    iterations: int
    termination: Termination

    @property
    def cardinality(self) -> int:
        return len(self.matching)


@dataclass
class AuctionState:
    """Mutable solver state for the stepwise interface.

    Single-owner: never share one instance across threads. Every left vertex
    is in exactly one of matching / free_queue / unmatchable, and
    ``iteration == levels.sum()`` between steps.
    """

    graph: BipartiteGraph
    matching: dict[int, int]
    reverse_matching: dict[int, int]
    levels: np.ndarray
    free_queue: deque[int]
    unmatchable: frozenset[int]
    iteration: int = 0

    @property
    def cardinality(self) -> int:
        return len(self.matching)

    @property
    def level_cap(self) -> int:
        return self.graph.n * (self.graph.n - 1)

    def snapshot(self) -> "AuctionState":
        """Independent copy; mutating one does not affect the other."""
        return AuctionState(
            graph=self.graph,
            matching=dict(self.matching),
            reverse_matching=dict(self.reverse_matching),
            levels=self.levels.copy(),
            free_queue=deque(self.free_queue),
            unmatchable=self.unmatchable,
            iteration=self.iteration,
        )


def init_state(g: BipartiteGraph) -> AuctionState:
    """Fresh state: all levels zero, matchable left vertices queued in index order.

    Left vertices with no neighbors can never bid and go straight to
    ``unmatchable``; a run on such a graph ends NO_FREE_MATCHABLE unless the
    level cap intervenes first.
    """
    degrees = g.degrees_u()
    return AuctionState(
        graph=g,
        matching={},
        reverse_matching={},
        levels=np.zeros(g.n, dtype=np.int64),
        free_queue=deque(int(u) for u in np.flatnonzero(degrees > 0)),
        unmatchable=frozenset(int(u) for u in np.flatnonzero(degrees == 0)),
    )


def _pop_free(state: AuctionState, policy: SelectionPolicy, rng) -> int:
    if policy is SelectionPolicy.FIFO:
        return state.free_queue.popleft()
    if policy is SelectionPolicy.LIFO:
        return state.free_queue.pop()
    i = int(rng.integers(len(state.free_queue)))
    u = state.free_queue[i]
    del state.free_queue[i]
    return u


def bid_step(
    state: AuctionState,
    policy: SelectionPolicy = SelectionPolicy.FIFO,
    rng: np.random.Generator | None = None,
) -> StepReport:
    """Perform one bid, mutating ``state`` in place.

    The drawn vertex u takes its lowest-level neighbor j (ties to the
    smallest index), evicting j's previous partner to the back of the queue;
    j's level and the iteration counter both rise by one.

    Args:
        state: current solver state.
        policy: queue discipline for drawing u.
        rng: random generator, required for SelectionPolicy.RANDOM.

    Raises:
        NoFreeVertexError: the free queue is empty.
        CapExceededError: the total-level cap was already reached.
        ValueError: RANDOM policy without an rng.
    """
    if not state.free_queue:
        raise NoFreeVertexError("no free matchable vertex remains")
    if state.iteration >= state.level_cap:
        raise CapExceededError(
            f"total level mass already at cap {state.level_cap}"
        )
    if policy is SelectionPolicy.RANDOM and rng is None:
        raise ValueError("RANDOM selection requires an rng")
    u = _pop_free(state, policy, rng)
    row = state.graph.neighbors_u(u)
    j = int(row[np.argmin(state.levels[row])])
    evicted = state.reverse_matching.get(j)
    if evicted is not None:
        del state.matching[evicted]
        state.free_queue.append(evicted)
    state.matching[u] = j
    state.reverse_matching[j] = u
    state.levels[j] += 1
    state.iteration += 1
    return StepReport(
        u=u,
        j=j,
        evicted=evicted,
        level_j=int(state.levels[j]),
        iteration=state.iteration,
    )


def _finish(state: AuctionState, termination: Termination) -> MatchResult:
    return MatchResult(
        matching=dict(sorted(state.matching.items())),
        levels=tuple(int(x) for x in state.levels),
        iterations=state.iteration,
        termination=termination,
    )


def run(
    g: BipartiteGraph,
    policy: SelectionPolicy = SelectionPolicy.FIFO,
    seed: int | None = None,
    on_step=None,
) -> MatchResult:
    """Solve ``g`` to termination.

    With the default FIFO policy and no observer this dispatches to the
    active kernel backend; otherwise it steps through the Python state
    machine. Both paths produce identical results for identical inputs.

    Args:
        g: the graph to match.
        policy: queue discipline; RANDOM requires ``seed``.
        seed: PRNG seed for RANDOM selection, ignored otherwise.
        on_step: optional callable ``(report, state)`` invoked after every
            bid; the state must be treated as read-only.

    Returns:
        MatchResult; deterministic given (g, policy, seed).
    """
    if policy is SelectionPolicy.RANDOM and seed is None:
        raise ValueError("RANDOM selection requires a seed")
    if policy is SelectionPolicy.FIFO and on_step is None:
        indptr, indices = g.csr_u()
        match_u, levels, iterations, code = _backend.solve_fifo(indptr, indices, g.n)
        return MatchResult(
            matching={int(u): int(v) for u, v in enumerate(match_u) if v >= 0},
            levels=tuple(int(x) for x in levels),
            iterations=iterations,
            termination=_CODE_TO_TERMINATION[code],
        )
    rng = np.random.Generator(np.random.PCG64(seed)) if seed is not None else None
    state = init_state(g)
    while True:
        if state.cardinality == g.n:
            return _finish(state, Termination.PERFECT)
        if state.iteration >= state.level_cap:
            return _finish(state, Termination.LEVEL_CAP_REACHED)
        if not state.free_queue:
            return _finish(state, Termination.NO_FREE_MATCHABLE)
        report = bid_step(state, policy, rng)
        if on_step is not None:
            on_step(report, state)


def check_eps_cs(state: AuctionState) -> bool:
    """Check the level-form complementary slackness condition.

    True iff every matched pair (u, j) satisfies
    ``levels[j] - 1 <= min(levels[v] for v in neighbors(u))``. Holds after
    every bid of every run; hand-built states may violate it.
    """
    levels = state.levels
    for u, j in state.matching.items():
        row = state.graph.neighbors_u(u)
        if row.size == 0:
            return False
        if levels[j] - 1 > int(levels[row].min()):
            return False
    return True


def iteration_bound(n: int, p: float, path_constant: float) -> float:
    """Predicted iteration ceiling ``n * (path_constant * ln n / ln(n p)) + n``.

    Valid only when the expected degree ``n * p`` exceeds 1, so the inner
    logarithm is positive. ``path_constant`` scales the augmenting-path
    length estimate; 0 degenerates to exactly ``n``.

    Raises:
        DomainError: if ``n * p <= 1``.
        ValueError: if ``path_constant`` is negative or ``n < 1``.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if path_constant < 0:
        raise ValueError(f"path_constant must be non-negative, got {path_constant}")
    if n * p <= 1.0:
        raise DomainError(f"requires n*p > 1, got n*p = {n * p}")
    return n * (path_constant * math.log(n) / math.log(n * p)) + n
