"""General auction for the weighted assignment problem on dense reward matrices.

Unassigned persons bid for their most profitable object, raising its price by
the profit margin over the runner-up plus epsilon; the displaced person, if
any, returns to the queue. At termination every assigned person is within
epsilon of its best profit (the complementary slackness condition below) and
the total reward is within ``N * epsilon`` of optimal.

This is the general algorithm that the level-based matching solver in
`bmcm.auction` specializes: 0/1 rewards, epsilon fixed at 1/N, and prices
encoded as integer multiples of epsilon.
"""

from __future__ import annotations

import csv
import itertools
import json
from collections import deque
from dataclasses import dataclass

import numpy as np

__all__ = [
    "AssignmentResult",
    "AssignmentState",
    "IterationLimitError",
    "NonFiniteRewardError",
    "RewardInstance",
    "auction_solve",
    "brute_force_optimum",
    "read_rewards_csv",
    "verify_eps_cs_general",
    "write_result_json",
]

# Slack for floating-point comparisons in the slackness check; the condition
# holds exactly in real arithmetic.
_FLOAT_SLACK = 1e-9


class NonFiniteRewardError(ValueError):
    """The reward matrix contains NaN or infinity."""


class IterationLimitError(RuntimeError):
    """auction_solve exceeded the caller-imposed iteration budget."""


@dataclass(frozen=True)
class RewardInstance:
    """A dense assignment problem: ``rewards[n, k]`` pays person n on object k.

    Requires at least as many objects as persons and a positive epsilon.
    The matrix is copied and frozen at construction.
    """

    rewards: np.ndarray
    epsilon: float

    def __post_init__(self) -> None:
        arr = np.array(self.rewards, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"rewards must be a non-empty 2-D matrix, got shape {arr.shape}")
        if arr.shape[0] > arr.shape[1]:
            raise ValueError(
                f"need at least as many objects as persons, got {arr.shape[0]}x{arr.shape[1]}"
            )
        if not np.isfinite(arr).all():
            raise NonFiniteRewardError("rewards must be finite")
        if not (self.epsilon > 0):
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        arr.flags.writeable = False
        object.__setattr__(self, "rewards", arr)

    @property
    def num_persons(self) -> int:
        return self.rewards.shape[0]

    @property
    def num_objects(self) -> int:
        return self.rewards.shape[1]


@dataclass
class AssignmentState:
    """Mutable solver state: prices, the partial assignment, and the queue."""

    prices: np.ndarray
    assignment: dict[int, int]
    reverse_assignment: dict[int, int]
    unassigned: deque[int]
    unassignable: set[int]
    iterations: int = 0


@dataclass(frozen=True)
class AssignmentResult:
    """Outcome of auction_solve.

    ``assignment`` maps person to object; persons dropped under the
    positive-profit restriction are absent. ``total_reward`` sums the reward
    of every assigned pair.
    """

    assignment: dict[int, int]
    prices: tuple[float, ...]
    total_reward: float
    iterations: int

    def to_json_dict(self, num_persons: int) -> dict:
        by_person = [self.assignment.get(n) for n in range(num_persons)]
        return {
            "assignment": by_person,
            "prices": list(self.prices),
            "total_reward": self.total_reward,
            "iterations": self.iterations,
        }


def _init_state(inst: RewardInstance) -> AssignmentState:
    return AssignmentState(
        prices=np.zeros(inst.num_objects, dtype=np.float64),
        assignment={},
        reverse_assignment={},
        unassigned=deque(range(inst.num_persons)),
        unassignable=set(),
    )


def auction_solve(
    inst: RewardInstance,
    restrict_to_positive: bool = False,
    max_iterations: int | None = None,
    on_step=None,
) -> AssignmentResult:
    """Run the auction to termination.

    Each step pops the longest-waiting unassigned person n, computes its
    best profit ``gamma = max_k(rewards[n, k] - prices[k])`` at object
    ``k_best`` (ties to the smallest index) and the second-best profit
    ``omega`` over the remaining objects, then raises the price of
    ``k_best`` by ``gamma - omega + epsilon`` and reassigns it to n,
    displacing any previous holder back into the queue. When only one object
    is biddable, ``omega`` falls back to ``gamma`` so the raise is exactly
    epsilon.

    Args:
        inst: the problem instance.
        restrict_to_positive: if True, persons bid only on objects with
            strictly positive profit and drop out permanently when none
            exists (profits never increase, so dropping is final). Off by
            default; then every person is assigned at termination.
        max_iterations: optional bid budget for tests.
        on_step: optional callable ``(person, obj, increase)`` invoked after
            every bid.

    Returns:
        AssignmentResult; deterministic given the instance and flags.

    Raises:
        IterationLimitError: the bid budget was exhausted.
    """
    rewards = inst.rewards
    eps = inst.epsilon
    state = _init_state(inst)
    prices = state.prices
    queue = state.unassigned
    while queue:
        n = queue.popleft()
        profits = rewards[n] - prices
        if restrict_to_positive:
            candidates = np.flatnonzero(profits > 0)
            if candidates.size == 0:
                state.unassignable.add(n)
                continue
        else:
            candidates = None
        if candidates is None:
            k_best = int(np.argmax(profits))
            gamma = float(profits[k_best])
            if profits.size > 1:
                others = np.delete(profits, k_best)
                omega = float(others.max())
            else:
                omega = gamma
        else:
            pool = profits[candidates]
            best_pos = int(np.argmax(pool))
            k_best = int(candidates[best_pos])
            gamma = float(pool[best_pos])
            if pool.size > 1:
                others = np.delete(pool, best_pos)
                omega = float(others.max())
            else:
                omega = gamma
        increase = gamma - omega + eps
        prices[k_best] += increase
        holder = state.reverse_assignment.get(k_best)
        if holder is not None:
            del state.assignment[holder]
            queue.append(holder)
        state.assignment[n] = k_best
        state.reverse_assignment[k_best] = n
        state.iterations += 1
        if on_step is not None:
            on_step(n, k_best, increase)
        if max_iterations is not None and state.iterations >= max_iterations and queue:
            raise IterationLimitError(f"no termination within {max_iterations} bids")
    total = float(sum(rewards[n, k] for n, k in state.assignment.items()))
    return AssignmentResult(
        assignment=dict(sorted(state.assignment.items())),
        prices=tuple(float(x) for x in prices),
        total_reward=total,
        iterations=state.iterations,
    )


def verify_eps_cs_general(inst: RewardInstance, state: AssignmentState) -> bool:
    """Complementary slackness: each assigned person is within epsilon of its best profit.

    Checks ``rewards[n, k_n] - prices[k_n] >= max_k(rewards[n, k] - prices[k])
    - epsilon`` for every assigned pair, with a small float slack. Vacuously
    true for an empty assignment.
    """
    for n, k in state.assignment.items():
        profits = inst.rewards[n] - state.prices
        if profits[k] < profits.max() - inst.epsilon - _FLOAT_SLACK:
            return False
    return True


def brute_force_optimum(rewards) -> tuple[dict[int, int], float]:
    """Exhaustive assignment oracle: best total reward over all injections.

    Tries every ordered choice of distinct objects for the persons, so it is
    only usable for tiny instances (test oracle, factorial cost).
    """
    arr = np.asarray(rewards, dtype=np.float64)
    n_persons, n_objects = arr.shape
    best_total = -np.inf
    best: tuple[int, ...] | None = None
    for combo in itertools.permutations(range(n_objects), n_persons):
        total = float(arr[np.arange(n_persons), combo].sum())
        if total > best_total:
            best_total = total
            best = combo
    assert best is not None
    return {n: k for n, k in enumerate(best)}, best_total


def read_rewards_csv(path) -> np.ndarray:
    """Parse a reward matrix from CSV, one row per person, numeric entries.

    Raises:
        ValueError: empty file, ragged rows, or a non-numeric entry.
    """
    rows: list[list[float]] = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        for line_no, record in enumerate(csv.reader(fh), start=1):
            if not record or all(not cell.strip() for cell in record):
                continue
            try:
                rows.append([float(cell) for cell in record])
            except ValueError:
                raise ValueError(f"line {line_no}: non-numeric entry") from None
            if len(rows[-1]) != len(rows[0]):
                raise ValueError(f"line {line_no}: expected {len(rows[0])} columns")
    if not rows:
        raise ValueError("no data rows")
    return np.array(rows, dtype=np.float64)


def write_result_json(result: AssignmentResult, num_persons: int, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(result.to_json_dict(num_persons), fh, indent=2)
        fh.write("\n")
