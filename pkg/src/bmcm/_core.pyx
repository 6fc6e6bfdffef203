# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled bidding kernel. Mirrors bmcm._core_py.solve_fifo exactly."""

import numpy as np

cdef enum TerminationCode:
    _PERFECT = 0
    _LEVEL_CAP = 1
    _NO_FREE = 2

PERFECT = _PERFECT
LEVEL_CAP = _LEVEL_CAP
NO_FREE = _NO_FREE


def solve_fifo(const long long[::1] indptr, const long long[::1] indices, long long n):
    """Run the auction to termination on a CSR adjacency.

    Same contract as the pure-Python twin: returns
    ``(match_u, levels, iterations, code)``.
    """
    match_u_arr = np.full(n, -1, dtype=np.int64)
    match_v_arr = np.full(n, -1, dtype=np.int64)
    levels_arr = np.zeros(n, dtype=np.int64)
    # Ring buffer: at most n free vertices at any time, n+1 slots disambiguate
    # full from empty.
    queue_arr = np.empty(n + 1, dtype=np.int64)

    cdef long long[::1] match_u = match_u_arr
    cdef long long[::1] match_v = match_v_arr
    cdef long long[::1] levels = levels_arr
    cdef long long[::1] queue = queue_arr

    cdef long long head = 0, tail = 0, qsize = n + 1
    cdef long long u, j, v, old, k, best_level
    cdef long long matched = 0, iterations = 0
    cdef long long cap = n * (n - 1)
    cdef int code

    for u in range(n):
        if indptr[u + 1] > indptr[u]:
            queue[tail] = u
            tail = (tail + 1) % qsize

    with nogil:
        while True:
            if matched == n:
                code = _PERFECT
                break
            if iterations >= cap:
                code = _LEVEL_CAP
                break
            if head == tail:
                code = _NO_FREE
                break
            u = queue[head]
            head = (head + 1) % qsize
            j = indices[indptr[u]]
            best_level = levels[j]
            for k in range(indptr[u] + 1, indptr[u + 1]):
                v = indices[k]
                if levels[v] < best_level:
                    best_level = levels[v]
                    j = v
            old = match_v[j]
            if old >= 0:
                match_u[old] = -1
                queue[tail] = old
                tail = (tail + 1) % qsize
            else:
                matched += 1
            match_u[u] = j
            match_v[j] = u
            levels[j] += 1
            iterations += 1

    return match_u_arr, levels_arr, int(iterations), int(code)
