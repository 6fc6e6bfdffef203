"""Differential tests: compiled kernel vs pure-Python kernel vs state machine."""

import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings

from bmcm import _backend, _core_py
from bmcm.auction import SelectionPolicy, run
from bmcm.graph import BipartiteGraph, GraphGenSpec, generate_bnp

from strategies import random_graphs

_compiled = pytest.importorskip("bmcm._core", reason="compiled kernel not built")


def _solve_both(g):
    indptr, indices = g.csr_u()
    return (
        _core_py.solve_fifo(indptr, indices, g.n),
        _compiled.solve_fifo(indptr, indices, g.n),
    )


def _assert_same(pure, compiled):
    assert np.array_equal(pure[0], compiled[0])
    assert np.array_equal(pure[1], compiled[1])
    assert pure[2] == compiled[2]
    assert pure[3] == compiled[3]


class TestKernelEquivalence:
    @given(random_graphs(max_n=48))
    @settings(max_examples=80, deadline=None)
    def test_kernels_agree(self, g):
        pure, compiled = _solve_both(g)
        _assert_same(pure, compiled)

    @given(random_graphs(max_n=32))
    @settings(max_examples=40, deadline=None)
    def test_kernel_agrees_with_state_machine(self, g):
        stepwise = run(g, SelectionPolicy.FIFO, on_step=lambda rep, state: None)
        kernel = run(g)
        assert kernel == stepwise

    def test_codes_match(self):
        assert _core_py.PERFECT == _compiled.PERFECT == 0
        assert _core_py.LEVEL_CAP == _compiled.LEVEL_CAP == 1
        assert _core_py.NO_FREE == _compiled.NO_FREE == 2

    def test_heavy_eviction_ring_buffer_stress(self):
        # Every left vertex shares one right vertex: the free queue wraps
        # around its ring buffer many times before the level cap fires.
        n = 50
        g = BipartiteGraph(n, [[0]] * n)
        pure, compiled = _solve_both(g)
        _assert_same(pure, compiled)
        assert pure[3] == _core_py.LEVEL_CAP
        assert pure[2] == n * (n - 1)

    def test_degenerate_inputs(self):
        for g in (
            BipartiteGraph(1, [[]]),
            BipartiteGraph(1, [[0]]),
            BipartiteGraph(3, [[], [], []]),
            BipartiteGraph(2, [[0], []]),
        ):
            pure, compiled = _solve_both(g)
            _assert_same(pure, compiled)

    def test_large_instance(self):
        g = generate_bnp(GraphGenSpec(n=512, p=0.02, seed=31))
        pure, compiled = _solve_both(g)
        _assert_same(pure, compiled)


class TestBackendSelection:
    def test_active_backend_named(self):
        assert _backend.BACKEND in ("compiled", "python")
        assert callable(_backend.solve_fifo)

    def test_env_override_forces_pure(self):
        code = "from bmcm._backend import BACKEND; print(BACKEND)"
        env = dict(os.environ, BMCM_PURE_PYTHON="1")
        out = subprocess.run(
            [sys.executable, "-c", code], env=env, capture_output=True, text=True
        )
        assert out.stdout.strip() == "python"

    def test_default_prefers_compiled(self):
        env = {k: v for k, v in os.environ.items() if k != "BMCM_PURE_PYTHON"}
        code = "from bmcm._backend import BACKEND; print(BACKEND)"
        out = subprocess.run(
            [sys.executable, "-c", code], env=env, capture_output=True, text=True
        )
        assert out.stdout.strip() == "compiled"
