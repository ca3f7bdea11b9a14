import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nildegen import _kernels_py, kernels
from nildegen.conditions import PRIME

compiled = pytest.importorskip("nildegen._kernels")


def test_backend_selected():
    assert kernels.BACKEND in ("cython", "python")


def test_env_forces_fallback():
    env = dict(os.environ, NILDEGEN_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "from nildegen import kernels; print(kernels.BACKEND)"], env=env, capture_output=True, text=True
    )
    assert out.stdout.strip() == "python"


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_adjugate_parity(n, seed):
    P = np.random.default_rng(seed).integers(-3, 4, size=(20, n, n)).astype(np.int64)
    d1, a1 = _kernels_py.adjugate_batch(P)
    d2, a2 = compiled.adjugate_batch(P)
    assert np.array_equal(d1, d2) and np.array_equal(a1, a2)
    for t in range(len(P)):
        assert np.array_equal(P[t] @ a1[t], d1[t] * np.eye(n, dtype=np.int64))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_rebase_parity(seed):
    rng = np.random.default_rng(seed)
    P = rng.integers(-2, 3, size=(16, 5, 5)).astype(np.int64)
    c = rng.integers(-5, 6, size=(5, 5, 5)).astype(np.int64)
    _, adj = _kernels_py.adjugate_batch(P)
    assert np.array_equal(_kernels_py.rebase_modp(P, adj, c, PRIME), compiled.rebase_modp(P, adj, c, PRIME))


@settings(max_examples=100, deadline=None)
@given(st.lists(st.dictionaries(st.integers(0, 9), st.integers(-20, 20), max_size=5), max_size=12))
def test_rank_parity(rows):
    r1 = _kernels_py.int_rank(rows, 10)
    r2 = compiled.int_rank(rows, 10)
    dense = np.array([[row.get(c, 0) for c in range(10)] for row in rows], dtype=float).reshape(len(rows), 10)
    assert r1 == r2 == (np.linalg.matrix_rank(dense) if rows else 0)
