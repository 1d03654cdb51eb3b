import numpy as np
import pytest

from pvdcov.errors import DegenerateScreeningError, InvalidArgumentError
from pvdcov.lorec import LorecConfig, lorec_estimate
from pvdcov.methods import METHODS, MethodConfig, run_method
from pvdcov.moments import sample_covariance
from pvdcov.pipeline import pvd_lorec, pvd_poet, universal_threshold_estimate
from pvdcov.poet import poet_estimate
from pvdcov.pvd import PvdResult, detect
from pvdcov.thresholding import ThresholdSpec, apply_threshold

from conftest import factor_data


def zero_outside(est):
    inside = np.zeros(est.p, dtype=bool)
    inside[est.j_hat] = True
    block = inside[:, None] & inside[None, :]
    return np.all(est.low_rank[~block] == 0.0)


@pytest.mark.parametrize("seed", range(3))
def test_zero_block_invariant_and_assembly(seed):
    x = factor_data(np.random.default_rng(seed), n=80, p=20, s0=6)
    for est in (pvd_lorec(x), pvd_poet(x), pvd_poet(x, k=2)):
        assert zero_outside(est)
        np.testing.assert_allclose(est.sigma, est.low_rank + est.sparse, atol=1e-10)
        assert np.array_equal(est.sigma, est.sigma.T)
        np.testing.assert_array_equal(est.j_hat, detect(x).j_hat)


def test_full_set_reduces_to_plain_methods(rng):
    x = factor_data(rng, n=60, p=10)
    everything = np.arange(10)
    np.testing.assert_allclose(pvd_lorec(x, j_hat=everything).sigma, lorec_estimate(x).sigma, atol=1e-10, rtol=0)
    for k in (1, 2, "auto"):
        np.testing.assert_allclose(pvd_poet(x, k=k, j_hat=everything).sigma, poet_estimate(x, k=k).sigma, atol=1e-10, rtol=0)


def test_pvd_lorec_pieces(rng):
    x = factor_data(rng, n=80, p=20, s0=6)
    j = np.arange(6)
    cfg = LorecConfig.auto(80, 6)
    est = pvd_lorec(x, j_hat=j, lorec_cfg=cfg)
    s = sample_covariance(x)
    # off-blocks are universally thresholded, the JJ block is LOREC's sparse part
    ref = apply_threshold(s, ThresholdSpec.universal(80, 20))
    outside = np.ones((20, 20), dtype=bool)
    outside[:6, :6] = False
    np.testing.assert_array_equal(est.sparse[outside], ref[outside])
    sub = lorec_estimate(x[:, j], cfg)
    np.testing.assert_allclose(est.low_rank[:6, :6], sub.low_rank, atol=1e-12)
    np.testing.assert_allclose(est.sparse[:6, :6], sub.sparse, atol=1e-12)
    assert est.diagnostics["lam"] == pytest.approx(np.sqrt(6 / 80))


def test_pvd_poet_full_shrinkage_on_noiseless_factor_data(rng):
    n, p, s0 = 200, 10, 4
    b = np.zeros((p, 1))
    b[:s0, 0] = [2.0, -1.5, 1.0, 2.5]
    x = rng.standard_normal((n, 1)) @ b.T + 0.3 * rng.standard_normal((n, p))
    est = pvd_poet(x, k=1, c=1e6, j_hat=np.arange(s0))
    off = est.sparse - np.diag(np.diag(est.sparse))
    assert np.all(off == 0)
    np.testing.assert_allclose(est.sigma, est.low_rank + np.diag(np.diag(est.sparse)), atol=1e-12)


def test_pd_repair_applies_after_assembly(rng):
    x = factor_data(rng, n=30, p=25, s0=5)
    thr = ThresholdSpec.universal(30, 25, constant=0.1, pd_repair=True)
    est = pvd_lorec(x, thr=thr, j_hat=np.arange(5))
    assert np.linalg.eigvalsh(est.sparse)[0] >= 1e-8 * (1 - 1e-6)


def test_degenerate_screening_raises(rng):
    x = factor_data(rng, n=60, p=10)
    with pytest.raises(DegenerateScreeningError):
        pvd_lorec(x, j_hat=[3])
    with pytest.raises(DegenerateScreeningError):
        pvd_poet(x, k=2, j_hat=[1, 2])


def test_same_input_gives_identical_output(rng):
    x = factor_data(rng, n=60, p=15)
    for f in (pvd_lorec, pvd_poet):
        a, b = f(x), f(x.copy())
        np.testing.assert_array_equal(a.sigma, b.sigma)


def test_universal_threshold_estimate(rng):
    x = factor_data(rng, n=60, p=15)
    est = universal_threshold_estimate(x)
    np.testing.assert_array_equal(est.sigma, apply_threshold(sample_covariance(x), ThresholdSpec.universal(60, 15)))
    assert est.k_hat == 0 and np.all(est.low_rank == 0)


def test_run_method_dispatch(rng):
    x = factor_data(rng, n=60, p=15)
    for name in METHODS:
        res = run_method(x, MethodConfig(name, k=2))
        if name == "pvd":
            assert isinstance(res, PvdResult)
        else:
            assert res.method == name and res.sigma.shape == (15, 15)
    est = run_method(x, MethodConfig("lorec", lam=0.4, rho=0.1))
    assert est.diagnostics["lam"] == 0.4


def test_method_config_validation():
    with pytest.raises(InvalidArgumentError):
        MethodConfig("glasso")
    with pytest.raises(InvalidArgumentError):
        MethodConfig("lorec", lam=0.1)
    with pytest.raises(InvalidArgumentError):
        MethodConfig("pvd", ridge=-2.0)
