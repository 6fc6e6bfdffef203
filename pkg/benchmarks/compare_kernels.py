"""Compare the compiled and pure-Python bidding kernels on identical inputs.

Usage: python benchmarks/compare_kernels.py [--n 512,1024,2048] [--c 3.0]
       [--seeds 5]

Prints one line per n with median wall time for each kernel and the speedup.
Also cross-checks that both kernels return identical results, so the run
doubles as a differential test at scale.
"""

from __future__ import annotations

import argparse
import math
import statistics
import time

import numpy as np

from bmcm import _core_py
from bmcm.graph import GraphGenSpec, generate_bnp

try:
    from bmcm import _core
except ImportError:
    _core = None


def time_kernel(kernel, indptr, indices, n, repeats):
    results = []
    times = []
    for _ in range(repeats):
        start = time.perf_counter_ns()
        out = kernel.solve_fifo(indptr, indices, n)
        times.append(time.perf_counter_ns() - start)
        results.append(out)
    return results[0], statistics.median(times)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", default="512,1024,2048", help="comma-separated sizes")
    parser.add_argument("--c", type=float, default=3.0, help="density coefficient c*log(n)/n")
    parser.add_argument("--seeds", type=int, default=5, help="instances per size")
    parser.add_argument("--repeats", type=int, default=3, help="timing repeats per instance")
    args = parser.parse_args()

    if _core is None:
        print("compiled kernel unavailable; timing the pure kernel only")

    sizes = [int(tok) for tok in args.n.split(",")]
    print(f"{'n':>6} {'pure_ms':>12} {'compiled_ms':>12} {'speedup':>8}")
    for n in sizes:
        p = min(1.0, args.c * math.log(n) / n)
        pure_times = []
        compiled_times = []
        for seed in range(args.seeds):
            g = generate_bnp(GraphGenSpec(n=n, p=p, seed=seed))
            indptr, indices = g.csr_u()
            pure_out, t_pure = time_kernel(_core_py, indptr, indices, n, args.repeats)
            pure_times.append(t_pure)
            if _core is not None:
                comp_out, t_comp = time_kernel(_core, indptr, indices, n, args.repeats)
                compiled_times.append(t_comp)
                same = (
                    np.array_equal(pure_out[0], comp_out[0])
                    and np.array_equal(pure_out[1], comp_out[1])
                    and pure_out[2:] == comp_out[2:]
                )
                if not same:
                    print(f"MISMATCH at n={n} seed={seed}")
                    return 1
        pure_ms = statistics.median(pure_times) / 1e6
        if compiled_times:
            comp_ms = statistics.median(compiled_times) / 1e6
            print(f"{n:>6} {pure_ms:>12.3f} {comp_ms:>12.3f} {pure_ms / comp_ms:>8.1f}x")
        else:
            print(f"{n:>6} {pure_ms:>12.3f} {'-':>12} {'-':>8}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
