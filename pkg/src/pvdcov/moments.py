"""Sample moments: column means, sample covariance and variance-of-products.

All moments use the divisor ``n``.
"""

from __future__ import annotations

import numpy as np

from . import kernels
from .errors import InvalidArgumentError, InvalidInputError

__all__ = ["as_data", "sample_covariance", "theta_hat", "THETA_VARIANTS"]

THETA_VARIANTS = ("paper", "centered")


def as_data(x, name: str = "data") -> np.ndarray:
    """Validate an ``n x p`` observation matrix (rows are samples)."""
    a = np.asarray(x, dtype=float)
    if a.ndim != 2:
        raise InvalidInputError(f"{name} must be 2-D (n x p), got shape {a.shape}")
    n, p = a.shape
    if n < 2:
        raise InvalidInputError(f"{name} needs at least 2 observations, got n={n}")
    if p < 2:
        raise InvalidInputError(f"{name} needs at least 2 variables, got p={p}")
    if not np.all(np.isfinite(a)):
        raise InvalidInputError(f"{name} contains non-finite entries")
    return a


def sample_covariance(x) -> np.ndarray:
    """Centered sample covariance with divisor ``n``."""
    a = as_data(x)
    xc = a - a.mean(axis=0)
    s = xc.T @ xc / a.shape[0]
    return (s + s.T) / 2.0


def theta_hat(x, variant: str = "paper", sigma: np.ndarray | None = None) -> np.ndarray:
    """Estimate ``theta_ij = var(X_i X_j)`` entrywise.

    ``variant="paper"`` evaluates ``n^-1 sum_k (X_ki X_kj - Xbar_i Xbar_j - s_ij)^2``
    on the raw data; ``variant="centered"`` evaluates
    ``n^-1 sum_k ((X_ki - Xbar_i)(X_kj - Xbar_j) - s_ij)^2``. The two agree
    when the column means are zero.

    Parameters
    ----------
    x : array (n, p)
    variant : {"paper", "centered"}
    sigma : array (p, p), optional
        Precomputed :func:`sample_covariance` of ``x``.
    """
    if variant not in THETA_VARIANTS:
        raise InvalidArgumentError(f"theta variant must be one of {THETA_VARIANTS}, got {variant!r}")
    a = as_data(x)
    s = sample_covariance(a) if sigma is None else np.asarray(sigma, dtype=float)
    mean = a.mean(axis=0)
    if variant == "paper":
        at = np.ascontiguousarray(a.T)
        offset = np.outer(mean, mean) + s
    else:
        at = np.ascontiguousarray((a - mean).T)
        offset = s
    theta = kernels.theta_kernel(at, np.ascontiguousarray(offset))
    return np.maximum(theta, 0.0)
