"""Backend parity for the round-trajectory kernel."""

import os
import subprocess
import sys

import numpy as np
import pytest

from logipure._kernels import HAS_NUMBA, trajectory_kernel


def random_problem(dim=6, n_cols=3, seed=0):
    rng = np.random.default_rng(seed)

    def cmat(*shape):
        return rng.normal(size=shape) + 1j * rng.normal(size=shape)

    k_first = 0.6 * cmat(dim, dim)
    k_later = 0.5 * cmat(dim, dim)
    ensemble = cmat(dim, n_cols) / (dim * n_cols)
    target = cmat(dim)
    target /= np.linalg.norm(target)
    return k_first, k_later, ensemble, target


def test_backends_agree():
    args = random_problem()
    f_np, pr_np, pc_np, tr_np = trajectory_kernel(*args, 40, 0.0, backend="numpy")
    if not HAS_NUMBA:
        pytest.skip("numba not installed")
    f_nb, pr_nb, pc_nb, tr_nb = trajectory_kernel(*args, 40, 0.0, backend="numba")
    assert tr_np == tr_nb
    assert np.allclose(f_np, f_nb, atol=1e-12, rtol=1e-12)
    assert np.allclose(pr_np, pr_nb, atol=1e-12, rtol=1e-12)
    assert np.allclose(pc_np, pc_nb, atol=1e-12, rtol=1e-12)


def test_truncation_at_floor():
    k_first, k_later, ensemble, target = random_problem(seed=3)
    # later rounds shrink the weight below the floor; round one passes
    k_later *= 0.01
    fid, p_round, p_cum, truncated = trajectory_kernel(
        k_first, k_later, ensemble, target, 100, 1e-3, backend="numpy"
    )
    assert truncated
    assert 1 <= len(fid) < 100
    assert all(p >= 1e-3 for p in p_round)


def test_no_truncation_without_floor():
    args = random_problem(seed=4)
    fid, p_round, p_cum, truncated = trajectory_kernel(*args, 25, 0.0, backend="numpy")
    assert not truncated
    assert len(fid) == len(p_round) == len(p_cum) == 25
    # cumulative weight is the running product of per-round weights
    assert np.allclose(np.cumprod(p_round), p_cum, rtol=1e-12)


def test_unknown_backend():
    args = random_problem()
    with pytest.raises(ValueError):
        trajectory_kernel(*args, 10, 0.0, backend="fortran")


def test_env_flag_disables_numba():
    """LOGIPURE_NUMBA=0 must flip the module default to the numpy twin."""
    code = (
        "import logipure._kernels as k;"
        "print(k.NUMBA_ENABLED)"
    )
    env = dict(os.environ, LOGIPURE_NUMBA="0")
    out = subprocess.run(
        [sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True
    )
    assert out.stdout.strip() == "False"
    env_on = {k: v for k, v in os.environ.items() if k != "LOGIPURE_NUMBA"}
    out_on = subprocess.run(
        [sys.executable, "-c", code], env=env_on, capture_output=True, text=True, check=True
    )
    assert out_on.stdout.strip() == ("True" if HAS_NUMBA else "False")
