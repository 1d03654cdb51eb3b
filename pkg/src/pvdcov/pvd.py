"""Pivotal-variable detection.

Screening works on the row energies ``r_i = p^-1 sum_j s_ij^2`` of the
sample covariance. After sorting them in decreasing order, the number of
pivotal variables is the argmin of the ridge ratios

    R_i = (r_(i+1) + l_n) / (r_(i) + l_n),    i = 1, ..., p - 1,

and the pivotal set collects the indices of the ``s0_hat`` largest energies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import InvalidArgumentError, InvalidInputError
from .linalg import as_symmetric
from .moments import as_data, sample_covariance

__all__ = [
    "PvdConfig",
    "PvdResult",
    "auto_ridge",
    "row_energy",
    "ridge_ratios",
    "detect",
    "detect_from_covariance",
    "select_from_energy",
]

TIE_BREAKS = ("smallest-index",)


def auto_ridge(n: int, p: int) -> float:
    """Default ridge ``l_n = ((log p)^5 / n)^(3/8)`` (natural log)."""
    return (math.log(p) ** 5 / n) ** 0.375


@dataclass(frozen=True)
class PvdConfig:
    """Screening configuration.

    ``ridge`` is a positive float or ``"auto"`` (see :func:`auto_ridge`).
    """

    ridge: float | str = "auto"
    tie_break: str = "smallest-index"

    def __post_init__(self):
        if isinstance(self.ridge, str):
            if self.ridge != "auto":
                raise InvalidArgumentError(f"ridge must be a positive number or 'auto', got {self.ridge!r}")
        elif not (self.ridge > 0 and math.isfinite(self.ridge)):
            raise InvalidArgumentError(f"ridge must be positive, got {self.ridge}")
        if self.tie_break not in TIE_BREAKS:
            raise InvalidArgumentError(f"unknown tie_break {self.tie_break!r}")

    def resolve_ridge(self, n: int, p: int) -> float:
        return auto_ridge(n, p) if self.ridge == "auto" else float(self.ridge)


@dataclass(frozen=True)
class PvdResult:
    """Output of :func:`detect`.

    Attributes
    ----------
    r_hat : array (p,)
        Row energies.
    order : array (p,)
        Indices sorting ``r_hat`` decreasingly (ties: smaller index first).
    ratios : array (p - 1,)
        Ridge ratios of the sorted energies.
    s0_hat : int
        Estimated number of pivotal variables.
    j_hat : array
        Sorted 0-based indices of the detected pivotal variables.
    ridge : float
        The ridge value actually used.
    """

    r_hat: np.ndarray
    order: np.ndarray
    ratios: np.ndarray
    s0_hat: int
    j_hat: np.ndarray
    ridge: float


def row_energy(sigma_hat) -> np.ndarray:
    """Row energies ``p^-1 sum_j s_ij^2`` (diagonal term included)."""
    s = as_symmetric(sigma_hat, "sigma_hat")
    if s.shape[0] < 2:
        raise InvalidInputError("row_energy needs p >= 2")
    return kernels.row_energy_kernel(np.ascontiguousarray(s))


def ridge_ratios(r_sorted_desc, ridge: float) -> np.ndarray:
    """Ratios ``(r_(i+1) + ridge) / (r_(i) + ridge)`` of a non-increasing sequence."""
    r = np.asarray(r_sorted_desc, dtype=float)
    if r.ndim != 1 or r.size < 2:
        raise InvalidArgumentError("ridge_ratios needs a 1-D array with at least 2 values")
    if not ridge > 0:
        raise InvalidArgumentError(f"ridge must be positive, got {ridge}")
    if np.any(r < 0):
        raise InvalidArgumentError("row energies must be nonnegative")
    if np.any(np.diff(r) > 0):
        raise InvalidArgumentError("input must be sorted in non-increasing order")
    return (r[1:] + ridge) / (r[:-1] + ridge)


def select_from_energy(r_hat, ridge: float) -> PvdResult:
    """Run the ratio criterion on precomputed row energies."""
    r = np.asarray(r_hat, dtype=float)
    order = np.argsort(-r, kind="stable")
    ratios = ridge_ratios(r[order], ridge)
    # argmin returns the first minimizer: ties resolve to fewer pivotal variables
    s0_hat = int(np.argmin(ratios)) + 1
    j_hat = np.sort(order[:s0_hat])
    return PvdResult(r_hat=r, order=order, ratios=ratios, s0_hat=s0_hat, j_hat=j_hat, ridge=float(ridge))


def detect_from_covariance(sigma_hat, n: int, cfg: PvdConfig | None = None) -> PvdResult:
    """Screen a precomputed sample covariance built from ``n`` observations."""
    cfg = cfg or PvdConfig()
    r = row_energy(sigma_hat)
    return select_from_energy(r, cfg.resolve_ridge(n, r.size))


def detect(x, cfg: PvdConfig | None = None) -> PvdResult:
    """Detect pivotal variables from an ``n x p`` data matrix."""
    a = as_data(x)
    return detect_from_covariance(sample_covariance(a), a.shape[0], cfg)
