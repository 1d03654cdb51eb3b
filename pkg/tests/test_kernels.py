"""Parity between the compiled kernels and the NumPy fallback."""

import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from pvdcov import _pykernels, kernels

ck = pytest.importorskip("pvdcov._ckernels", reason="compiled extension not built")

small = st.tuples(st.integers(2, 8), st.integers(2, 6))


@given(small.flatmap(lambda s: arrays(np.float64, s, elements=st.floats(-5, 5))))
def test_theta_kernel_parity(x):
    at = np.ascontiguousarray(x.T)
    mean = x.mean(axis=0)
    offset = np.ascontiguousarray(np.outer(mean, mean) + np.cov(x.T, bias=True).reshape(x.shape[1], -1))
    np.testing.assert_allclose(ck.theta_kernel(at, offset), _pykernels.theta_kernel(at, offset), rtol=1e-12, atol=1e-12)


def test_row_energy_and_threshold_parity(rng):
    m = rng.standard_normal((9, 9))
    m = m + m.T
    np.testing.assert_allclose(ck.row_energy_kernel(m), _pykernels.row_energy_kernel(m), rtol=1e-13)
    tau = np.abs(rng.standard_normal((9, 9)))
    mask = (rng.random((9, 9)) < 0.6).astype(np.uint8)
    for soft in (True, False):
        for keep in (True, False):
            a = ck.threshold_kernel(m, tau, mask, soft, keep)
            b = _pykernels.threshold_kernel(m, tau, mask, soft, keep)
            np.testing.assert_array_equal(a, b)


def test_backend_is_compiled_by_default():
    assert kernels.BACKEND == "cython"


def test_env_var_forces_python_backend():
    env = dict(os.environ, PVDCOV_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "import pvdcov.kernels as k; print(k.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"


def test_fallback_pipeline_matches_compiled(monkeypatch, rng):
    """The whole estimator gives the same answer on either backend."""
    from pvdcov import pvd_poet

    x = rng.standard_normal((60, 15))
    x[:, :4] += 2.0 * rng.standard_normal((60, 1))
    compiled = pvd_poet(x, k=1)
    for name in ("theta_kernel", "row_energy_kernel", "threshold_kernel"):
        monkeypatch.setattr(kernels, name, getattr(_pykernels, name))
    fallback = pvd_poet(x, k=1)
    np.testing.assert_array_equal(compiled.j_hat, fallback.j_hat)
    np.testing.assert_allclose(compiled.sigma, fallback.sigma, rtol=1e-12, atol=1e-13)
