"""Entrywise thresholding estimators of sparse covariance matrices.

Threshold levels are ``tau_ij = C * omega`` (universal) or
``tau_ij = C * omega * sqrt(theta_ij)`` (adaptive), where ``omega`` is a
rate factor supplied by the caller; :meth:`ThresholdSpec.universal` and
:meth:`ThresholdSpec.adaptive` build the usual choices from ``(n, p)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import kernels
from .errors import InvalidArgumentError, InvalidInputError
from .linalg import as_symmetric, eigenvalue_floor

__all__ = ["ThresholdSpec", "apply_threshold", "threshold_blocks", "off_block_mask", "UNIVERSAL_C", "ADAPTIVE_C"]

MODES = ("universal", "adaptive")
RULES = ("soft", "hard")
PD_FLOOR = 1e-8
UNIVERSAL_C = 1.0
ADAPTIVE_C = 0.5


@dataclass(frozen=True)
class ThresholdSpec:
    mode: str = "universal"
    constant: float = 0.5
    omega: float = 0.0
    rule: str = "soft"
    preserve_diagonal: bool = True
    pd_repair: bool = False

    def __post_init__(self):
        if self.mode not in MODES:
            raise InvalidArgumentError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.rule not in RULES:
            raise InvalidArgumentError(f"rule must be one of {RULES}, got {self.rule!r}")
        if not self.constant >= 0:
            raise InvalidArgumentError(f"threshold constant must be >= 0, got {self.constant}")
        if not self.omega >= 0:
            raise InvalidArgumentError(f"omega must be >= 0, got {self.omega}")

    @classmethod
    def universal(cls, n: int, p: int, constant: float = UNIVERSAL_C, **kw) -> "ThresholdSpec":
        """``tau = C sqrt(log p / n)``.

        The default ``C = 1`` sits above the sampling noise of an entry of the
        sample covariance with unit variances (about ``1/sqrt(n)``) once
        ``log p`` exceeds 1; ``C = 0.5`` lets most pure-noise entries through.
        """
        return cls(mode="universal", constant=constant, omega=math.sqrt(math.log(p) / n), **kw)

    @classmethod
    def adaptive(cls, n: int, p: int, s0: int, constant: float = ADAPTIVE_C, **kw) -> "ThresholdSpec":
        """``tau_ij = C (sqrt(1/s0) + sqrt(log p / n)) sqrt(theta_ij)``."""
        omega = math.sqrt(1.0 / s0) + math.sqrt(math.log(p) / n)
        return cls(mode="adaptive", constant=constant, omega=omega, **kw)

    def with_constant(self, constant: float) -> "ThresholdSpec":
        return replace(self, constant=constant)

    def tau(self, p: int, theta: np.ndarray | None = None) -> np.ndarray:
        """Matrix of threshold levels."""
        level = self.constant * self.omega
        if self.mode == "universal":
            return np.full((p, p), level)
        if theta is None:
            raise InvalidArgumentError("adaptive thresholding requires a theta matrix")
        t = np.asarray(theta, dtype=float)
        if t.shape != (p, p):
            raise InvalidInputError(f"theta must have shape {(p, p)}, got {t.shape}")
        if not np.all(np.isfinite(t)) or np.any(t < 0):
            raise InvalidInputError("theta entries must be finite and nonnegative")
        return level * np.sqrt(t)


def _threshold(m: np.ndarray, spec: ThresholdSpec, theta, mask: np.ndarray, repair: bool) -> np.ndarray:
    tau = spec.tau(m.shape[0], theta)
    out = kernels.threshold_kernel(
        np.ascontiguousarray(m),
        np.ascontiguousarray(tau),
        np.ascontiguousarray(mask, dtype=np.uint8),
        spec.rule == "soft",
        spec.preserve_diagonal,
    )
    out = (out + out.T) / 2.0
    if repair:
        out, _ = eigenvalue_floor(out, PD_FLOOR)
    return out


def apply_threshold(m, spec: ThresholdSpec, theta=None) -> np.ndarray:
    """Threshold every entry of ``m`` (the diagonal is kept when ``preserve_diagonal``)."""
    a = as_symmetric(m)
    mask = np.ones(a.shape, dtype=np.uint8)
    return _threshold(a, spec, theta, mask, spec.pd_repair)


def off_block_mask(p: int, j_hat) -> np.ndarray:
    """Boolean mask of entries ``(i, j)`` with ``i`` or ``j`` outside ``j_hat``."""
    idx = np.asarray(j_hat, dtype=int).reshape(-1)
    if idx.size and (idx.min() < 0 or idx.max() >= p):
        raise InvalidArgumentError(f"index set out of range for p={p}")
    if np.unique(idx).size != idx.size:
        raise InvalidArgumentError("index set contains duplicates")
    inside = np.zeros(p, dtype=bool)
    inside[idx] = True
    return ~(inside[:, None] & inside[None, :])


def threshold_blocks(sigma_hat, j_hat, spec: ThresholdSpec, theta=None) -> np.ndarray:
    """Threshold only the entries with ``i`` or ``j`` outside ``j_hat``.

    The ``j_hat x j_hat`` block is returned unchanged for the caller to replace;
    ``spec.pd_repair`` is not applied here since the assembled matrix is not final.
    """
    a = as_symmetric(sigma_hat, "sigma_hat")
    mask = off_block_mask(a.shape[0], j_hat)
    return _threshold(a, spec, theta, mask, False)
