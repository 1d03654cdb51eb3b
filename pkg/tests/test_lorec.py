import numpy as np
import pytest

from pvdcov.errors import InvalidArgumentError
from pvdcov.lorec import LorecConfig, alternating_prox, lorec_estimate, objective, solve
from pvdcov.moments import sample_covariance
from pvdcov.oracles import lorec_reference

from conftest import factor_data



def kkt_residual(sigma, low, sparse, lam, rho, tol=1e-7):
    """Largest violation of 0 in the subdifferential of the objective at (L, S)."""
    g = sigma - low - sparse  # must equal lam * dnuc(L) and rho * dl1(S)
    w, v = np.linalg.eigh(low)
    active = np.abs(w) > tol
    u, n = v[:, active], v[:, ~active]
    r = g / lam
    nuc = [np.max(np.abs(u.T @ r @ u - np.diag(np.sign(w[active])))) if active.any() else 0.0]
    if active.any() and n.size:
        nuc.append(np.max(np.abs(u.T @ r @ n)))
    if n.size:
        nuc.append(max(0.0, np.max(np.abs(np.linalg.eigvalsh(n.T @ r @ n))) - 1.0))
    on = np.abs(sparse) > tol
    l1 = [np.max(np.abs(g[on] - rho * np.sign(sparse[on])), initial=0.0) / rho,
          max(0.0, np.max(np.abs(g[~on]), initial=0.0) - rho) / rho]
    return max(max(nuc), max(l1))


def cvx_objective(sigma, lam, rho):
    cp = pytest.importorskip("cvxpy")
    p = sigma.shape[0]
    low = cp.Variable((p, p), symmetric=True)
    sparse = cp.Variable((p, p), symmetric=True)
    prob = cp.Problem(cp.Minimize(
        0.5 * cp.sum_squares(sigma - low - sparse) + lam * cp.normNuc(low) + rho * cp.sum(cp.abs(sparse))
    ))
    prob.solve(solver=cp.CLARABEL)
    return prob.value


def spike6():
    b = np.array([1.0, 1, 1, 0, 0, 0])
    return np.outer(b, b) + 0.1 * np.eye(6)


def test_unpenalized_sweep_returns_sigma_as_low_rank(rng):
    s = sample_covariance(rng.standard_normal((20, 5)))
    split = alternating_prox(s, 0.0, 0.0, max_iter=5)
    np.testing.assert_array_equal(split.low_rank, s)
    assert np.all(split.sparse == 0) and split.objective_trace[0] == 0.0


def test_full_shrinkage_gives_zero(rng):
    s = sample_covariance(rng.standard_normal((20, 5)))
    split = solve(s, LorecConfig(lam=np.abs(np.linalg.eigvalsh(s)).max() + 1, rho=np.abs(s).max() + 1))
    assert np.all(split.low_rank == 0) and np.all(split.sparse == 0)


def test_spike_with_small_l1_weight_is_certified_optimum_with_zero_low_rank():
    # with rho=0.05 absorbing the spike into S is cheaper than the nuclear norm
    s = spike6()
    split = solve(s, LorecConfig(lam=0.3, rho=0.05, max_iter=5000, tol=1e-12))
    assert np.all(split.low_rank == 0)
    assert kkt_residual(s, split.low_rank, split.sparse, 0.3, 0.05) < 1e-5
    assert objective(s, split.low_rank, split.sparse, 0.3, 0.05) == pytest.approx(cvx_objective(s, 0.3, 0.05), rel=1e-6)


def test_spike_with_larger_l1_weight_is_rank_one():
    s = spike6()
    split = solve(s, LorecConfig(lam=0.3, rho=0.2, max_iter=5000, tol=1e-12))
    w = np.sort(np.abs(np.linalg.eigvalsh(split.low_rank)))[::-1]
    assert w[0] > 1e-6 and np.all(w[1:] < 1e-6)
    off = split.sparse - np.diag(np.diag(split.sparse))
    assert np.all(np.abs(np.diag(split.sparse)) >= np.abs(off).max(axis=1))
    assert kkt_residual(s, split.low_rank, split.sparse, 0.3, 0.2) < 1e-5


@pytest.mark.parametrize("seed", range(4))
def test_small_instance_matches_independent_solvers(seed):
    rng = np.random.default_rng(seed)
    s = sample_covariance(factor_data(rng, n=40, p=7, k=1, s0=3))
    lam, rho = rng.uniform(0.2, 1.0), rng.uniform(0.05, 0.4)
    split = solve(s, LorecConfig(lam=lam, rho=rho, max_iter=5000, tol=1e-12))
    got = objective(s, split.low_rank, split.sparse, lam, rho)
    ref_l, ref_s = lorec_reference(s, lam, rho)
    assert (got - objective(s, ref_l, ref_s, lam, rho)) / got <= 1e-4
    assert (got - cvx_objective(s, lam, rho)) / got <= 1e-4
    assert kkt_residual(s, split.low_rank, split.sparse, lam, rho) < 1e-4


@pytest.mark.parametrize("seed", range(5))
def test_objective_is_monotone_and_outputs_symmetric(seed):
    rng = np.random.default_rng(seed)
    s = sample_covariance(factor_data(rng, n=50, p=10))
    split = solve(s, LorecConfig(lam=0.5, rho=0.1, max_iter=300, tol=1e-10))
    tr = split.objective_trace
    assert np.all(np.diff(tr) <= 1e-12 * np.abs(tr[:-1]))
    assert np.array_equal(split.low_rank, split.low_rank.T)
    assert np.array_equal(split.sparse, split.sparse.T)


def test_auto_tuning_on_identity_covariance():
    x = np.random.default_rng(0).standard_normal((20000, 5))
    est = lorec_estimate(x)
    assert np.abs(est.low_rank).max() < 1e-12
    np.testing.assert_allclose(est.sparse, np.eye(5), atol=0.05)
    assert est.k_hat == 0


def test_estimate_is_deterministic(rng):
    x = factor_data(rng, n=60, p=15)
    a, b = lorec_estimate(x), lorec_estimate(x.copy())
    np.testing.assert_array_equal(a.sigma, b.sigma)
    assert a.diagnostics["lam"] == pytest.approx(np.sqrt(15 / 60))
    np.testing.assert_allclose(a.sigma, a.low_rank + a.sparse, atol=1e-12)


def test_iteration_cap_reported(rng):
    s = sample_covariance(factor_data(rng, n=60, p=15))
    split = solve(s, LorecConfig(lam=0.5, rho=0.05, max_iter=2, tol=1e-14))
    assert split.iterations == 2 and not split.converged


def test_config_validation():
    with pytest.raises(InvalidArgumentError):
        LorecConfig(lam=0.0, rho=0.1)
    with pytest.raises(InvalidArgumentError):
        LorecConfig(lam=0.1, rho=0.1, max_iter=0)
    with pytest.raises(InvalidArgumentError):
        alternating_prox(np.eye(2), -1.0, 0.0)
