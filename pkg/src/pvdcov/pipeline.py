"""Two-stage estimators: screen pivotal variables, then fit the factor part on them.

Both estimators return a :class:`~pvdcov.estimate.CovEstimate` whose
low-rank part is exactly zero outside the ``j_hat x j_hat`` block.
"""

from __future__ import annotations

import time

import numpy as np

from .errors import DegenerateScreeningError
from .estimate import CovEstimate, embed_block, numerical_rank
from .linalg import eigenvalue_floor
from .lorec import LorecConfig, solve
from .moments import as_data, sample_covariance, theta_hat
from .poet import _resolve_k, poet_decompose
from .pvd import PvdConfig, detect_from_covariance
from .thresholding import PD_FLOOR, ThresholdSpec, apply_threshold, threshold_blocks

__all__ = ["pvd_lorec", "pvd_poet", "universal_threshold_estimate"]


def _screen(sigma_hat: np.ndarray, n: int, pvd_cfg: PvdConfig | None, j_hat) -> tuple[np.ndarray, dict]:
    if j_hat is not None:
        idx = np.unique(np.asarray(j_hat, dtype=int))
        return idx, {"s0_hat": int(idx.size), "forced_j": True}
    res = detect_from_covariance(sigma_hat, n, pvd_cfg)
    return res.j_hat, {"s0_hat": res.s0_hat, "ridge": res.ridge}


def pvd_lorec(
    x,
    pvd_cfg: PvdConfig | None = None,
    lorec_cfg: LorecConfig | None = None,
    thr: ThresholdSpec | None = None,
    *,
    j_hat=None,
    max_iter: int = 500,
    tol: float = 1e-6,
) -> CovEstimate:
    """PVD-based LOREC.

    LOREC runs on the ``j_hat`` block of the sample covariance (auto tuning
    with working dimension ``|j_hat|`` when ``lorec_cfg`` is None); every
    entry with an index outside ``j_hat`` gets universal soft thresholding
    ``C sqrt(log p / n)`` with the diagonal kept.

    ``j_hat`` forces the pivotal set and skips detection. ``max_iter`` and
    ``tol`` apply to the auto-tuned solver only.
    """
    a = as_data(x)
    n, p = a.shape
    start = time.perf_counter()
    sigma_hat = sample_covariance(a)
    idx, diag = _screen(sigma_hat, n, pvd_cfg, j_hat)
    if idx.size < 2:
        raise DegenerateScreeningError(f"pivotal set has {idx.size} element(s); LOREC needs at least 2")
    cfg = lorec_cfg or LorecConfig.auto(n, idx.size, max_iter=max_iter, tol=tol)
    thr = thr or ThresholdSpec.universal(n, p)

    split = solve(sigma_hat[np.ix_(idx, idx)], cfg)
    sparse = threshold_blocks(sigma_hat, idx, thr)
    sparse[np.ix_(idx, idx)] = split.sparse
    if thr.pd_repair:
        sparse, _ = eigenvalue_floor(sparse, PD_FLOOR)
    low_rank = embed_block(split.low_rank, idx, p)
    diag.update(
        iterations=split.iterations,
        converged=split.converged,
        lam=cfg.lam,
        rho=cfg.rho,
        seconds=time.perf_counter() - start,
    )
    return CovEstimate(
        sigma=low_rank + sparse,
        low_rank=low_rank,
        sparse=sparse,
        k_hat=numerical_rank(split.low_rank),
        method="pvd-lorec",
        j_hat=idx,
        diagnostics=diag,
    )


def pvd_poet(
    x,
    pvd_cfg: PvdConfig | None = None,
    k: int | str = "auto",
    c: float = 0.5,
    *,
    theta_variant: str = "paper",
    rule: str = "soft",
    j_hat=None,
) -> CovEstimate:
    """PVD-based POET.

    POET on the ``j_hat`` columns yields loadings and residuals there; the
    residual vectors are completed with the raw remaining columns, and their
    sample covariance is adaptively thresholded with
    ``c (sqrt(1/|j_hat|) + sqrt(log p / n)) sqrt(theta_ij)``.
    """
    a = as_data(x)
    n, p = a.shape
    start = time.perf_counter()
    sigma_hat = sample_covariance(a)
    idx, diag = _screen(sigma_hat, n, pvd_cfg, j_hat)
    sub_sigma = sigma_hat[np.ix_(idx, idx)]
    k_hat = _resolve_k(k, sub_sigma, n) if idx.size >= 2 else 0
    if idx.size < k_hat + 1 or idx.size < 2:
        raise DegenerateScreeningError(f"pivotal set has {idx.size} element(s); need more than k={k_hat}")
    fit = poet_decompose(a[:, idx], k_hat, sigma_hat=sub_sigma)

    u_tilde = a.copy()
    u_tilde[:, idx] = fit.residuals
    su = sample_covariance(u_tilde)
    # equal to the residual covariance up to round-off; keeps the j_hat = all case identical to POET
    su[np.ix_(idx, idx)] = fit.complement
    if c == 0:
        sparse = su
    else:
        spec = ThresholdSpec.adaptive(n, p, s0=idx.size, constant=c, rule=rule)
        sparse = apply_threshold(su, spec, theta_hat(u_tilde, variant=theta_variant))

    low_rank = embed_block(fit.spike, idx, p)
    diag.update(seconds=time.perf_counter() - start)
    return CovEstimate(
        sigma=low_rank + sparse,
        low_rank=low_rank,
        sparse=sparse,
        k_hat=k_hat,
        method="pvd-poet",
        j_hat=idx,
        diagnostics=diag,
    )


def universal_threshold_estimate(x, thr: ThresholdSpec | None = None) -> CovEstimate:
    """Plain universal soft thresholding of the sample covariance (no factor part)."""
    a = as_data(x)
    n, p = a.shape
    start = time.perf_counter()
    thr = thr or ThresholdSpec.universal(n, p)
    sparse = apply_threshold(sample_covariance(a), thr)
    return CovEstimate(
        sigma=sparse.copy(),
        low_rank=np.zeros((p, p)),
        sparse=sparse,
        k_hat=0,
        method="threshold",
        diagnostics={"seconds": time.perf_counter() - start},
    )
