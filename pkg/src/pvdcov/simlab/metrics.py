"""Evaluation metrics for screening and covariance estimation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InvalidArgumentError, InvalidInputError
from ..linalg import as_symmetric, inv_sqrt, operator_norm

__all__ = ["ScreeningSummary", "screening_metrics", "re_metric", "eu_metric"]


@dataclass(frozen=True)
class ScreeningSummary:
    """Mean and SD of ``|J_t|`` plus exact-recovery, false-positive and false-negative rates."""

    mean: float
    sd: float
    eq: float
    fp: float
    fn: float

    def as_dict(self) -> dict[str, float]:
        return {"Mean": self.mean, "SD": self.sd, "EQ": self.eq, "FP": self.fp, "FN": self.fn}


def screening_metrics(j_hats, true_j, p: int) -> ScreeningSummary:
    """Summarize detected sets over ``T`` replicas.

    The SD uses divisor ``T``.
    """
    j_hats = [set(int(i) for i in j) for j in j_hats]
    if not j_hats:
        raise InvalidArgumentError("screening_metrics needs at least one replica")
    truth = set(int(i) for i in true_j)
    p1 = len(truth)
    if not 0 < p1 < p:
        raise InvalidArgumentError(f"true set size must be in (0, p), got {p1} for p={p}")
    t = len(j_hats)
    sizes = np.array([len(j) for j in j_hats], dtype=float)
    eq = sum(j == truth for j in j_hats) / t
    fp = sum(len(j - truth) for j in j_hats) / ((p - p1) * t)
    fn = sum(len(truth - j) for j in j_hats) / (p1 * t)
    return ScreeningSummary(mean=float(sizes.mean()), sd=float(sizes.std()), eq=eq, fp=fp, fn=fn)


def _same_shape(a: np.ndarray, b: np.ndarray):
    if a.shape != b.shape:
        raise InvalidInputError(f"shape mismatch {a.shape} vs {b.shape}")


def re_metric(estimate, true_sigma, floor: float = 1e-12) -> float:
    """Relative error ``p^-1/2 ||Sigma^-1/2 Sigma_hat Sigma^-1/2 - I||_F``."""
    est = as_symmetric(estimate, "estimate")
    truth = as_symmetric(true_sigma, "true_sigma")
    _same_shape(est, truth)
    w = inv_sqrt(truth, floor)
    m = w @ est @ w - np.eye(est.shape[0])
    return float(np.linalg.norm(m, "fro") / np.sqrt(est.shape[0]))


def eu_metric(estimate_u, true_u) -> float:
    """Operator-norm error ``||Sigma_u_hat - Sigma_u||``."""
    est = as_symmetric(estimate_u, "estimate_u")
    truth = as_symmetric(true_u, "true_u")
    _same_shape(est, truth)
    return operator_norm(est - truth)
