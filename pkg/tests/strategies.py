"""Shared hypothesis strategies for graph-based property tests."""

from hypothesis import strategies as st

from bmcm.graph import MAX_SEED, BipartiteGraph, GraphGenSpec, generate_bnp

seeds = st.integers(min_value=0, max_value=MAX_SEED)


@st.composite
def gen_specs(draw, min_n=1, max_n=24):
    return GraphGenSpec(
        n=draw(st.integers(min_n, max_n)),
        p=draw(st.floats(0.0, 1.0)),
        seed=draw(seeds),
    )


@st.composite
def random_graphs(draw, min_n=1, max_n=24):
    """Graphs from the random model; covers empty, sparse, and dense regimes."""
    return generate_bnp(draw(gen_specs(min_n=min_n, max_n=max_n)))


@st.composite
def explicit_graphs(draw, min_n=1, max_n=10):
    """Graphs with arbitrary (not model-distributed) adjacency structure."""
    n = draw(st.integers(min_n, max_n))
    adjacency = [
        sorted(draw(st.sets(st.integers(0, n - 1), max_size=n))) for _ in range(n)
    ]
    return BipartiteGraph(n, adjacency)
