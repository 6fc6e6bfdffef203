import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from bmcm.auction import Termination, bid_step, init_state, run
from bmcm.graph import BipartiteGraph, GraphGenSpec, generate_bnp
from bmcm.verify import (
    InvalidMatchingError,
    LevelSets,
    Matching,
    check_level_lemma,
    check_path_length_lemma,
    hopcroft_karp,
    shortest_augmenting_path,
    simple_max_matching,
)

from strategies import random_graphs


def _scipy_cardinality(g):
    indptr, indices = g.csr_u()
    mat = csr_matrix(
        (np.ones(len(indices), dtype=np.int8), indices, indptr), shape=(g.n, g.n)
    )
    return int((maximum_bipartite_matching(mat, perm_type="column") >= 0).sum())


class TestMatchingType:
    def test_rejects_non_injective(self):
        with pytest.raises(InvalidMatchingError):
            Matching.from_pairs([(0, 0), (0, 1)])
        with pytest.raises(InvalidMatchingError):
            Matching.from_pairs([(0, 0), (1, 0)])

    def test_maps(self):
        m = Matching.from_pairs([(0, 1), (1, 0)])
        assert m.cardinality == 2
        assert m.left_map() == {0: 1, 1: 0}
        assert m.right_map() == {1: 0, 0: 1}


class TestHopcroftKarp:
    def test_k33(self):
        g = BipartiteGraph(3, [[0, 1, 2]] * 3)
        assert hopcroft_karp(g).cardinality == 3

    def test_shared_right_vertex(self):
        g = BipartiteGraph(2, [[0], [0]])
        assert hopcroft_karp(g).cardinality == 1

    def test_returns_valid_matching(self):
        g = generate_bnp(GraphGenSpec(n=32, p=0.15, seed=4))
        m = hopcroft_karp(g)
        assert all(g.has_edge(u, v) for u, v in m.pairs)

    def test_deterministic(self):
        g = generate_bnp(GraphGenSpec(n=48, p=0.1, seed=9))
        assert hopcroft_karp(g).pairs == hopcroft_karp(g).pairs

    @given(random_graphs(max_n=24))
    @settings(max_examples=60, deadline=None)
    def test_agrees_with_simple_matcher(self, g):
        assert hopcroft_karp(g).cardinality == simple_max_matching(g).cardinality

    @given(random_graphs(max_n=24))
    @settings(max_examples=40, deadline=None)
    def test_agrees_with_scipy(self, g):
        assert hopcroft_karp(g).cardinality == _scipy_cardinality(g)

    @given(random_graphs(max_n=20))
    @settings(max_examples=40, deadline=None)
    def test_maximum_no_augmenting_path_remains(self, g):
        m = hopcroft_karp(g)
        assert shortest_augmenting_path(g, m) is None


class TestShortestAugmentingPath:
    def test_empty_matching_on_k22(self):
        g = BipartiteGraph(2, [[0, 1], [0, 1]])
        assert shortest_augmenting_path(g, Matching.from_pairs([])) == 1

    def test_perfect_matching_has_none(self):
        g = BipartiteGraph(2, [[0, 1], [0, 1]])
        m = Matching.from_pairs([(0, 0), (1, 1)])
        assert shortest_augmenting_path(g, m) is None

    def test_free_edge_beats_long_path(self):
        g = BipartiteGraph(2, [[0], [0, 1]])
        assert shortest_augmenting_path(g, Matching.from_pairs([(0, 0)])) == 1

    def test_length_three_path(self):
        g = BipartiteGraph(2, [[0], [0, 1]])
        assert shortest_augmenting_path(g, Matching.from_pairs([(1, 0)])) == 3

    def test_non_edge_pair_rejected(self):
        g = BipartiteGraph(2, [[0], [1]])
        with pytest.raises(InvalidMatchingError):
            shortest_augmenting_path(g, Matching.from_pairs([(0, 1)]))

    def test_lengths_always_odd(self):
        g = generate_bnp(GraphGenSpec(n=24, p=0.08, seed=17))
        state = init_state(g)
        while (
            state.free_queue
            and state.iteration < state.level_cap
            and state.cardinality < g.n
        ):
            sap = shortest_augmenting_path(g, Matching.from_dict(state.matching))
            assert sap is None or sap % 2 == 1
            bid_step(state)


class TestLevelSets:
    def test_base_level_holds_everything(self):
        sets = LevelSets.from_levels([0, 2, 1])
        assert sets.at(0) == {0, 1, 2}
        assert sets.at(-1) == {0, 1, 2}
        assert sets.at(1) == {1, 2}
        assert sets.at(2) == {1}
        assert sets.at(3) == frozenset()

    @given(st.lists(st.integers(0, 6), min_size=1, max_size=12))
    def test_nesting(self, levels):
        assert LevelSets.from_levels(levels).is_nested()

    def test_monotone_over_time(self):
        g = generate_bnp(GraphGenSpec(n=24, p=0.2, seed=23))
        state = init_state(g)
        prev = LevelSets.from_levels(state.levels)
        while (
            state.free_queue
            and state.iteration < state.level_cap
            and state.cardinality < g.n
        ):
            bid_step(state)
            current = LevelSets.from_levels(state.levels)
            for level, members in prev.d.items():
                assert members <= current.at(level)
            prev = current


class TestLemmaCheckers:
    def test_fresh_state_passes_both(self):
        g = BipartiteGraph(2, [[0, 1], [0]])
        state = init_state(g)
        assert check_level_lemma(state)
        assert check_path_length_lemma(g, state)

    @given(random_graphs(min_n=2, max_n=16))
    @settings(max_examples=30, deadline=None)
    def test_hold_along_every_run(self, g):
        state = init_state(g)
        while (
            state.free_queue
            and state.iteration < state.level_cap
            and state.cardinality < g.n
        ):
            bid_step(state)
            snap = state.snapshot()
            assert check_level_lemma(snap)
            assert check_path_length_lemma(g, snap)

    def test_constructed_violation_fails_both(self):
        g = BipartiteGraph(2, [[0, 1], [0]])
        state = init_state(g)
        state.matching = {0: 0}
        state.reverse_matching = {0: 0}
        state.free_queue.clear()
        state.free_queue.append(1)
        state.levels = np.array([3, 0], dtype=np.int64)
        assert not check_level_lemma(state)
        assert not check_path_length_lemma(g, state)


class TestPerfectAgreement:
    @given(random_graphs(min_n=3, max_n=24))
    @settings(max_examples=60, deadline=None)
    def test_perfect_iff_oracle_full(self, g):
        result = run(g)
        oracle = hopcroft_karp(g).cardinality
        if result.termination is Termination.PERFECT:
            assert oracle == g.n
        if oracle == g.n:
            assert result.termination is Termination.PERFECT

    def test_exhaustive_n3(self):
        # All 512 graphs on 3+3 vertices: Perfect exactly when the oracle
        # certifies a perfect matching. (At n=2 one asymmetric instance is
        # truncated by the level cap; see the auction tests.)
        import itertools

        for bits in itertools.product([0, 1], repeat=9):
            adj = [[v for v in range(3) if bits[u * 3 + v]] for u in range(3)]
            g = BipartiteGraph(3, adj)
            perfect = run(g).termination is Termination.PERFECT
            assert perfect == (hopcroft_karp(g).cardinality == 3), adj
