"""Shared-memory parallel variant of the matching auction.

Parallelism lives entirely inside each bid: the bidder's neighbor list is cut
into contiguous slices, the workers reduce each slice to its local
(lowest level, smallest index) candidate, and the coordinator combines the
locals left to right with the same smallest-index tie-break the sequential
solver uses. All state updates stay on the coordinator, so the result is
identical to `auction.run` on every input, for every worker count.

Python threads suit this structure: the reduction is numpy work that releases
the GIL poorly for tiny slices, hence the chunk_min threshold below which the
bid is computed serially.
"""

from __future__ import annotations

import os
import time
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .auction import MatchResult, Termination, _CODE_TO_TERMINATION
from . import _backend
from .graph import BipartiteGraph

__all__ = ["ParallelConfig", "run_parallel", "speedup_probe", "write_speedup_csv"]


@dataclass(frozen=True)
class ParallelConfig:
    """Worker count and the smallest neighbor-list slice worth forking for."""

    q_workers: int = 1
    chunk_min: int = 64

    def __post_init__(self) -> None:
        if self.q_workers < 1:
            raise ValueError(f"q_workers must be >= 1, got {self.q_workers}")
        if self.chunk_min < 1:
            raise ValueError(f"chunk_min must be >= 1, got {self.chunk_min}")


def _effective_workers(requested: int) -> int:
    cap = os.environ.get("BMCM_THREADS", "")
    if cap:
        return max(1, min(requested, int(cap)))
    return requested


def _slice_min(levels: np.ndarray, row: np.ndarray, lo: int, hi: int) -> tuple[int, int]:
    """Local reduction over row[lo:hi]: (level value, right index) of the minimum.

    The slice is scanned through np.argmin, which takes the first minimum;
    rows are sorted, so the first minimum has the smallest right index.
    """
    chunk = row[lo:hi]
    pos = int(np.argmin(levels[chunk]))
    j = int(chunk[pos])
    return int(levels[j]), j


def run_parallel(g: BipartiteGraph, cfg: ParallelConfig = ParallelConfig()) -> MatchResult:
    """Solve ``g`` with cfg.q_workers, returning exactly what `auction.run` returns.

    The equivalence is structural, not incidental: every iteration picks the
    same bidder (FIFO), the same object (combining per-slice minima keeps
    the earlier slice on ties, which is the global smallest-index rule,
    since slices are contiguous and sorted), and applies the same commit.
    """
    n = g.n
    indptr, indices = g.csr_u()
    workers = _effective_workers(cfg.q_workers)
    if workers == 1:
        match_u, levels, iterations, code = _backend.solve_fifo(indptr, indices, n)
        return MatchResult(
            matching={int(u): int(v) for u, v in enumerate(match_u) if v >= 0},
            levels=tuple(int(x) for x in levels),
            iterations=iterations,
            termination=_CODE_TO_TERMINATION[code],
        )

    levels = np.zeros(n, dtype=np.int64)
    match_u = np.full(n, -1, dtype=np.int64)
    match_v = np.full(n, -1, dtype=np.int64)
    queue = deque(u for u in range(n) if indptr[u + 1] > indptr[u])
    matched = 0
    iterations = 0
    cap = n * (n - 1)
    termination = None
    with ThreadPoolExecutor(max_workers=workers) as pool:
        while True:
            if matched == n:
                termination = Termination.PERFECT
                break
            if iterations >= cap:
                termination = Termination.LEVEL_CAP_REACHED
                break
            if not queue:
                termination = Termination.NO_FREE_MATCHABLE
                break
            u = queue.popleft()
            row = indices[indptr[u] : indptr[u + 1]]
            deg = row.size
            if deg < cfg.chunk_min * 2:
                # Not worth forking; same reduction, one slice.
                _, j = _slice_min(levels, row, 0, deg)
            else:
                n_chunks = min(workers, max(1, deg // cfg.chunk_min))
                bounds = np.linspace(0, deg, n_chunks + 1, dtype=np.int64)
                futures = [
                    pool.submit(_slice_min, levels, row, int(lo), int(hi))
                    for lo, hi in zip(bounds, bounds[1:])
                    if hi > lo
                ]
                # Combine left to right; strict < keeps the earlier chunk on
                # ties, i.e. the smaller right index.
                best_level, j = futures[0].result()
                for fut in futures[1:]:
                    lv, jj = fut.result()
                    if lv < best_level:
                        best_level, j = lv, jj
            # Commit phase: single-threaded, workers are idle here.
            old = match_v[j]
            if old >= 0:
                match_u[old] = -1
                queue.append(int(old))
            else:
                matched += 1
            match_u[u] = j
            match_v[j] = u
            levels[j] += 1
            iterations += 1
    return MatchResult(
        matching={int(u): int(v) for u, v in enumerate(match_u) if v >= 0},
        levels=tuple(int(x) for x in levels),
        iterations=iterations,
        termination=termination,
    )


def speedup_probe(g: BipartiteGraph, q_list, chunk_min: int = 64) -> list[tuple[int, int]]:
    """Wall-clock one run per worker count; informational, nothing asserted.

    Returns [(q, wall_time_ns), ...] in the order given.
    """
    table = []
    for q in q_list:
        cfg = ParallelConfig(q_workers=int(q), chunk_min=chunk_min)
        start = time.perf_counter_ns()
        run_parallel(g, cfg)
        table.append((int(q), time.perf_counter_ns() - start))
    return table


def write_speedup_csv(table, path) -> None:
    """Write a speedup_probe table as CSV with header ``q,wall_time_ns``."""
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("q,wall_time_ns\n")
        for q, wall in table:
            fh.write(f"{q},{wall}\n")
