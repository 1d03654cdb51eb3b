"""Principal orthogonal complement thresholding (POET).

The ``k`` leading eigenpairs of the sample covariance give the loadings
``B = [sqrt(l_1) v_1, ..., sqrt(l_k) v_k]``; the remaining part of the
spectrum (the principal orthogonal complement) is adaptively thresholded.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError, InvalidInputError
from .estimate import CovEstimate
from .linalg import EigenDecomposition, sym_eigen
from .moments import as_data, sample_covariance, theta_hat
from .thresholding import ThresholdSpec, apply_threshold

__all__ = ["FactorDecomposition", "default_k_max", "estimate_k", "poet_decompose", "poet_estimate"]

EIGEN_FLOOR = 1e-12


@dataclass
class FactorDecomposition:
    """Principal-component factor fit of centered data.

    Attributes
    ----------
    k_hat : int
    loadings : array (p, k)
        Columns ``sqrt(l_i) v_i``; ``loadings.T @ loadings`` is diagonal.
    factors : array (n, k)
    residuals : array (n, p)
        ``Xc - factors @ loadings.T`` for the column-centered data ``Xc``.
    spike : array (p, p)
        ``sum_{i<k} l_i v_i v_i^T``.
    sigma_hat : array (p, p)
        Sample covariance the decomposition was computed from.
    eigen : EigenDecomposition
    """

    k_hat: int
    loadings: np.ndarray
    factors: np.ndarray
    residuals: np.ndarray
    spike: np.ndarray
    sigma_hat: np.ndarray
    eigen: EigenDecomposition

    @property
    def complement(self) -> np.ndarray:
        """Principal orthogonal complement ``sigma_hat - spike``."""
        return self.sigma_hat - self.spike


def default_k_max(n: int, p: int) -> int:
    return max(1, min(20, min(n, p) // 2))


def estimate_k(sigma_hat, k_max: int) -> int:
    """Eigenvalue-ratio estimate ``argmax_{i <= k_max} l_i / l_{i+1}``.

    Eigenvalues are floored at 1e-12 first; ties go to the smallest ``i``.
    """
    values = np.linalg.eigvalsh(np.asarray(sigma_hat, dtype=float))[::-1]
    p = values.size
    if not 1 <= k_max <= p - 1:
        raise InvalidArgumentError(f"k_max must be in [1, {p - 1}], got {k_max}")
    lam = np.maximum(values[: k_max + 1], EIGEN_FLOOR)
    return int(np.argmax(lam[:-1] / lam[1:])) + 1


def poet_decompose(x, k: int, sigma_hat: np.ndarray | None = None) -> FactorDecomposition:
    """Fit ``k`` principal-component factors to the column-centered data."""
    a = as_data(x)
    n, p = a.shape
    if not 0 <= k <= min(n, p) - 1:
        raise InvalidArgumentError(f"k must be in [0, {min(n, p) - 1}], got {k}")
    xc = a - a.mean(axis=0)
    s = sample_covariance(a) if sigma_hat is None else sigma_hat
    eig = sym_eigen(s)
    lam = eig.values[:k]
    if k and lam[-1] <= 0:
        raise InvalidInputError(f"eigenvalue {k} of the sample covariance is not positive; lower k")
    vk = eig.vectors[:, :k]
    loadings = vk * np.sqrt(lam)
    # least squares against orthogonal loadings: f = diag(1/l) B^T x = V^T x / sqrt(l)
    factors = (xc @ vk) / np.sqrt(lam) if k else np.zeros((n, 0))
    residuals = xc - factors @ loadings.T
    spike = eig.reconstruct(k) if k else np.zeros((p, p))
    return FactorDecomposition(
        k_hat=k,
        loadings=loadings,
        factors=factors,
        residuals=residuals,
        spike=spike,
        sigma_hat=s,
        eigen=eig,
    )


def _resolve_k(k, sigma_hat: np.ndarray, n: int) -> int:
    p = sigma_hat.shape[0]
    if k == "auto" or k is None:
        return estimate_k(sigma_hat, min(default_k_max(n, p), p - 1))
    if isinstance(k, (int, np.integer)) and not isinstance(k, bool):
        return int(k)
    raise InvalidArgumentError(f"k must be a nonnegative integer or 'auto', got {k!r}")


def poet_estimate(
    x,
    k: int | str = "auto",
    c: float = 0.5,
    theta_variant: str = "paper",
    rule: str = "soft",
) -> CovEstimate:
    """POET: leading ``k`` eigencomponents plus thresholded complement.

    Thresholds are ``c * (sqrt(1/p) + sqrt(log p / n)) * sqrt(theta_ij)`` with
    ``theta`` estimated from the factor residuals.
    """
    a = as_data(x)
    n, p = a.shape
    start = time.perf_counter()
    sigma_hat = sample_covariance(a)
    k_hat = _resolve_k(k, sigma_hat, n)
    fit = poet_decompose(a, k_hat, sigma_hat=sigma_hat)
    complement = fit.complement
    if c == 0:
        sparse = complement
    else:
        spec = ThresholdSpec.adaptive(n, p, s0=p, constant=c, rule=rule)
        theta = theta_hat(fit.residuals, variant=theta_variant)
        sparse = apply_threshold(complement, spec, theta)
    return CovEstimate(
        sigma=fit.spike + sparse,
        low_rank=fit.spike,
        sparse=sparse,
        k_hat=k_hat,
        method="poet",
        diagnostics={"seconds": time.perf_counter() - start, "omega": math.sqrt(1 / p) + math.sqrt(math.log(p) / n)},
    )
