"""Command-line interface: generate, solve, verify, and bench subcommands.

Machine-readable results (JSON, CSV) go to stdout or the requested files;
all logging goes to stderr. Exit codes: 0 success, 1 verification failure,
2 invalid flags, 3 I/O or parse errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import bench as bench_mod
from .auction import SelectionPolicy, Termination, check_eps_cs, run
from .graph import (
    MAX_SEED,
    BipartiteGraph,
    GraphGenSpec,
    ParseError,
    generate_bnp,
    read_graph,
    sparsify,
    write_graph,
)
from .parallel import ParallelConfig, run_parallel
from .verify import check_level_lemma, hopcroft_karp

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_BAD_FLAGS = 2
EXIT_IO = 3

log = logging.getLogger("bmcm")


def _probability(text: str) -> float:
    value = float(text)
    if not (0.0 <= value <= 1.0):
        raise argparse.ArgumentTypeError(f"probability must lie in [0, 1], got {text}")
    return value


def _seed(text: str) -> int:
    value = int(text)
    if not (0 <= value <= MAX_SEED):
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {text}")
    return value


def _n_list(text: str) -> tuple[int, ...]:
    try:
        values = tuple(int(tok) for tok in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not values or any(n < 1 for n in values):
        raise argparse.ArgumentTypeError("n values must be positive integers")
    return values


def _p_rule(text: str):
    kind, sep, arg = text.partition(":")
    try:
        if kind == "fixed" and sep:
            return bench_mod.FixedP(float(arg))
        if kind == "clogn" and sep:
            return bench_mod.CLogOverN(float(arg))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    raise argparse.ArgumentTypeError(
        f"expected 'fixed:<p>' or 'clogn:<c>', got {text!r}"
    )


def _bench_algorithm(text: str):
    kind, _, arg = text.partition(":")
    try:
        if kind == "sequential":
            return bench_mod.Sequential()
        if kind == "parallel":
            return bench_mod.Parallel(q_workers=int(arg) if arg else 2)
        if kind == "sparsified":
            return bench_mod.Sparsified(c=float(arg) if arg else 3.0)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    raise argparse.ArgumentTypeError(
        f"expected sequential, parallel[:q], or sparsified[:c], got {text!r}"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bmcm",
        description="Auction-based bipartite matching: generation, solving, verification, benchmarks.",
    )
    parser.add_argument("--seed", type=_seed, default=0, help="PRNG seed (default 0)")
    parser.add_argument("--quiet", action="store_true", help="suppress progress logs")
    parser.add_argument("--trace", metavar="PATH", help="write per-bid JSON lines (solve only)")
    # The same flags are accepted after the subcommand; SUPPRESS keeps the
    # subparser from clobbering a value parsed at the top level.
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_seed, default=argparse.SUPPRESS, help=argparse.SUPPRESS)
    common.add_argument(
        "--quiet", action="store_true", default=argparse.SUPPRESS, help=argparse.SUPPRESS
    )
    common.add_argument("--trace", metavar="PATH", default=argparse.SUPPRESS, help=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser(
        "generate", parents=[common], help="sample a random graph and write it to a file"
    )
    p_gen.add_argument("--n", type=_positive_int, required=True, help="vertices per side")
    p_gen.add_argument("--p", type=_probability, required=True, help="edge probability")
    p_gen.add_argument("--out", required=True, help="output graph file")

    p_solve = sub.add_parser("solve", parents=[common], help="run the matching auction on a graph file")
    p_solve.add_argument("--in", dest="in_path", required=True, help="input graph file")
    p_solve.add_argument(
        "--algorithm",
        choices=("sequential", "parallel", "sparsified"),
        default="sequential",
    )
    p_solve.add_argument("--q", type=_positive_int, default=2, help="worker count for parallel")
    p_solve.add_argument(
        "--sparsify-c", type=float, default=3.0, help="density coefficient for sparsified"
    )

    p_verify = sub.add_parser("verify", parents=[common], help="run with per-step checks and an oracle comparison")
    p_verify.add_argument("--in", dest="in_path", required=True, help="input graph file")

    p_bench = sub.add_parser("bench", parents=[common], help="sweep (n, seed) cells and write CSV + summary")
    p_bench.add_argument("--n", type=_n_list, required=True, help="comma-separated n values")
    group = p_bench.add_mutually_exclusive_group(required=True)
    group.add_argument("--p", type=_probability, help="fixed edge probability")
    group.add_argument("--p-rule", type=_p_rule, help="fixed:<p> or clogn:<c>")
    p_bench.add_argument("--seeds", type=_positive_int, default=1, help="seeds per cell")
    p_bench.add_argument(
        "--algorithm",
        type=_bench_algorithm,
        default=bench_mod.Sequential(),
        help="sequential, parallel[:q], or sparsified[:c]",
    )
    p_bench.add_argument("--oracle-check", action="store_true", help="record oracle cardinality")
    p_bench.add_argument("--out", required=True, help="output CSV path")
    p_bench.add_argument("--summary", help="summary JSON path (default: <out>.summary.json)")
    return parser


def cmd_generate(args) -> int:
    g = generate_bnp(GraphGenSpec(n=args.n, p=args.p, seed=args.seed))
    write_graph(g, args.out)
    log.info("wrote %s (n=%d, edges=%d)", args.out, g.n, g.edge_count)
    return EXIT_OK


def _solve_once(g: BipartiteGraph, args, trace_fh):
    if args.algorithm == "parallel":
        if trace_fh is not None:
            log.warning("tracing is unavailable with --algorithm parallel; ignoring --trace")
        return run_parallel(g, ParallelConfig(q_workers=args.q))
    if trace_fh is not None:
        def observer(report, state):
            trace_fh.write(json.dumps(report.to_json_dict()) + "\n")

        return run(g, SelectionPolicy.FIFO, on_step=observer)
    return run(g)


def cmd_solve(args) -> int:
    g = read_graph(args.in_path)
    trace_fh = open(args.trace, "w", encoding="ascii") if args.trace else None
    try:
        if args.algorithm == "sparsified":
            thin = sparsify(g, args.sparsify_c, args.seed)
            result = _solve_once(thin, args, trace_fh)
            if result.termination is not Termination.PERFECT and thin is not g:
                log.info("sparsified run ended %s; rerunning on the full graph",
                         result.termination.value)
                result = _solve_once(g, args, trace_fh)
        else:
            result = _solve_once(g, args, trace_fh)
    finally:
        if trace_fh is not None:
            trace_fh.close()
    print(json.dumps({
        "cardinality": result.cardinality,
        "T": result.iterations,
        "termination": result.termination.value,
    }))
    return EXIT_OK


def cmd_verify(args) -> int:
    g = read_graph(args.in_path)
    failures = {"eps_cs": 0, "level_lemma": 0, "iteration_identity": 0}

    def observer(report, state):
        if not check_eps_cs(state):
            failures["eps_cs"] += 1
        if not check_level_lemma(state):
            failures["level_lemma"] += 1
        if state.iteration != int(state.levels.sum()):
            failures["iteration_identity"] += 1

    result = run(g, SelectionPolicy.FIFO, on_step=observer)
    oracle = hopcroft_karp(g).cardinality
    checks = {
        "eps_cs_every_step": failures["eps_cs"] == 0,
        "level_lemma_every_step": failures["level_lemma"] == 0,
        "iteration_identity_every_step": failures["iteration_identity"] == 0,
        "iterations_equal_level_sum": result.iterations == sum(result.levels),
        "cardinality_vs_oracle": result.cardinality <= oracle
        and (result.termination is not Termination.PERFECT or result.cardinality == g.n == oracle),
    }
    for name, ok in checks.items():
        print(f"{'PASS' if ok else 'FAIL'} {name}")
    print(
        f"cardinality={result.cardinality} oracle={oracle} "
        f"T={result.iterations} termination={result.termination.value}"
    )
    return EXIT_OK if all(checks.values()) else EXIT_CHECK_FAILED


def cmd_bench(args) -> int:
    p_rule = args.p_rule if args.p_rule is not None else bench_mod.FixedP(args.p)
    spec = bench_mod.ExperimentSpec(
        n_values=args.n,
        p_rule=p_rule,
        seeds=args.seeds,
        algorithm=args.algorithm,
        oracle_check=args.oracle_check,
        base_seed=args.seed,
    )
    report = bench_mod.run_experiment(spec)
    bench_mod.write_report_csv(report, args.out)
    summary_path = args.summary if args.summary else args.out + ".summary.json"
    bench_mod.write_summary_json(report, summary_path)
    log.info("wrote %d rows to %s, summary to %s", len(report.rows), args.out, summary_path)
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.WARNING if args.quiet else logging.INFO,
        format="%(levelname)s %(message)s",
    )
    handlers = {
        "generate": cmd_generate,
        "solve": cmd_solve,
        "verify": cmd_verify,
        "bench": cmd_bench,
    }
    try:
        return handlers[args.command](args)
    except ParseError as exc:
        log.error("invalid graph file: %s", exc)
        return EXIT_IO
    except OSError as exc:
        log.error("i/o error: %s", exc)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
