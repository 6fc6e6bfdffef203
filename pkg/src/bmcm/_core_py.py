"""Pure-Python bidding kernel, the fallback twin of the compiled extension.

Both kernels implement the same contract: FIFO free queue, lowest-level
neighbor selection with smallest-index tie-break, eviction with requeue,
and the ``n*(n-1)`` total-level cap. `bmcm._backend` picks one at import.
"""

from __future__ import annotations

from collections import deque

import numpy as np

PERFECT = 0
LEVEL_CAP = 1
NO_FREE = 2


def solve_fifo(indptr, indices, n):
    """Run the auction to termination on a CSR adjacency.

    Args:
        indptr: int64 array, length n+1; row pointer of the left adjacency.
        indices: int64 array; concatenated sorted neighbor lists.
        n: number of vertices per side.

    Returns:
        Tuple ``(match_u, levels, iterations, code)`` where ``match_u`` maps
        each left vertex to its right partner (-1 if unmatched), ``levels``
        is the final right-side level vector, ``iterations`` equals
        ``levels.sum()``, and ``code`` is PERFECT, LEVEL_CAP, or NO_FREE.
    """
    match_u = np.full(n, -1, dtype=np.int64)
    match_v = np.full(n, -1, dtype=np.int64)
    levels = np.zeros(n, dtype=np.int64)
    queue = deque(u for u in range(n) if indptr[u + 1] > indptr[u])
    matched = 0
    iterations = 0
    cap = n * (n - 1)
    while True:
        if matched == n:
            return match_u, levels, iterations, PERFECT
        if iterations >= cap:
            return match_u, levels, iterations, LEVEL_CAP
        if not queue:
            return match_u, levels, iterations, NO_FREE
        u = queue.popleft()
        row = indices[indptr[u] : indptr[u + 1]]
        j = row[np.argmin(levels[row])]
        old = match_v[j]
        if old >= 0:
            match_u[old] = -1
            queue.append(old)
        else:
            matched += 1
        match_u[u] = j
        match_v[j] = u
        levels[j] += 1
        iterations += 1
