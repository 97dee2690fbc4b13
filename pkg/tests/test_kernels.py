import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hkbench import kernels
from hkbench.kernels import python_rank_mod_p, rank_mod_p


def oracle_rank(M, p):
    """Plain-list Gaussian elimination, independent of both kernels."""
    A = [[int(v) % p for v in row] for row in M]
    rank = 0
    cols = len(A[0]) if A else 0
    for c in range(cols):
        piv = next((i for i in range(rank, len(A)) if A[i][c]), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        inv = pow(A[rank][c], -1, p)
        A[rank] = [v * inv % p for v in A[rank]]
        for i in range(len(A)):
            if i != rank and A[i][c]:
                f = A[i][c]
                A[i] = [(a - f * b) % p for a, b in zip(A[i], A[rank])]
        rank += 1
    return rank


def test_backend_reported():
    assert kernels.BACKEND in ("compiled", "python")


def test_known_ranks():
    assert rank_mod_p(np.eye(4, dtype=np.int64), 3) == 4
    M = np.array([[1, 2], [2, 4]], dtype=np.int64)
    assert rank_mod_p(M, 7) == 1
    assert rank_mod_p(np.array([[3, 0], [0, 3]], dtype=np.int64), 3) == 0
    assert rank_mod_p(np.zeros((0, 5), dtype=np.int64), 5) == 0


@pytest.mark.parametrize("p", [2, 3, 7, 65521, 2**31 - 1])
def test_kernels_agree_with_oracle(p):
    rng = np.random.default_rng(p)
    for shape in [(5, 5), (12, 7), (7, 12), (30, 30)]:
        M = rng.integers(0, p, size=shape, dtype=np.int64)
        if shape == (30, 30):
            M[:, 10:] = M[:, :20] * 3 % p  # force rank deficiency
        r = oracle_rank(M.tolist(), p)
        assert rank_mod_p(M.copy(), p) == r
        assert python_rank_mod_p(M.copy(), p) == r


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 9), st.integers(1, 9), st.sampled_from([2, 3, 5, 31]), st.integers(0, 2**32 - 1))
def test_random_matrices(rows, cols, p, seed):
    M = np.random.default_rng(seed).integers(0, p, size=(rows, cols), dtype=np.int64)
    r = oracle_rank(M.tolist(), p)
    assert rank_mod_p(M.copy(), p) == r == python_rank_mod_p(M.copy(), p)


def test_pure_fallback_selected_by_environment():
    import os
    import subprocess
    import sys

    env = dict(os.environ, HKBENCH_PURE="1")
    out = subprocess.run([sys.executable, "-c", "import hkbench.kernels as k; print(k.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
