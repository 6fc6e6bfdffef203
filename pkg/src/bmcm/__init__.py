"""Auction-based bipartite maximum-cardinality matching on random graphs.

Free vertices repeatedly bid for their cheapest neighbor, prices (integer
levels) rise, and the process terminates at a perfect matching or a proven
cap. The package bundles the solver (compiled kernel with a pure-Python
fallback), the general weighted-assignment auction it specializes,
independent oracles for verification, a result-identical parallel variant,
and a benchmark harness with a CLI.
"""

from ._backend import BACKEND
from .auction import (
    AuctionState,
    MatchResult,
    SelectionPolicy,
    StepReport,
    Termination,
    bid_step,
    check_eps_cs,
    init_state,
    iteration_bound,
    run,
)
from .assignment import (
    AssignmentResult,
    RewardInstance,
    auction_solve,
    brute_force_optimum,
    verify_eps_cs_general,
)
from .graph import (
    BipartiteGraph,
    GraphGenSpec,
    generate_bnp,
    read_graph,
    sparsify,
    write_graph,
)
from .parallel import ParallelConfig, run_parallel, speedup_probe
from .verify import (
    LevelSets,
    Matching,
    check_level_lemma,
    check_path_length_lemma,
    hopcroft_karp,
    shortest_augmenting_path,
    simple_max_matching,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "AssignmentResult",
    "AuctionState",
    "BipartiteGraph",
    "GraphGenSpec",
    "LevelSets",
    "MatchResult",
    "Matching",
    "ParallelConfig",
    "RewardInstance",
    "SelectionPolicy",
    "StepReport",
    "Termination",
    "auction_solve",
    "bid_step",
    "brute_force_optimum",
    "check_eps_cs",
    "check_level_lemma",
    "check_path_length_lemma",
    "generate_bnp",
    "hopcroft_karp",
    "init_state",
    "iteration_bound",
    "read_graph",
    "run",
    "run_parallel",
    "shortest_augmenting_path",
    "simple_max_matching",
    "sparsify",
    "speedup_probe",
    "verify_eps_cs_general",
    "write_graph",
    "__version__",
]
