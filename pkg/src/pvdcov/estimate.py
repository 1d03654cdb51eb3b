"""Container for an assembled covariance estimate."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np


@dataclass
class CovEstimate:
    """Covariance estimate ``sigma = low_rank + sparse`` with metadata.

    Attributes
    ----------
    sigma : array (p, p)
    low_rank : array (p, p)
        Common-component estimate; for PVD methods it vanishes outside the
        ``j_hat x j_hat`` block.
    sparse : array (p, p)
        Idiosyncratic covariance estimate.
    k_hat : int
        Number of factors (rank of ``low_rank``).
    j_hat : array or None
        Detected pivotal indices (0-based), PVD methods only.
    method : str
    diagnostics : dict
        Free-form run information (timing, iterations, convergence).
    """

    sigma: np.ndarray
    low_rank: np.ndarray
    sparse: np.ndarray
    k_hat: int
    method: str
    j_hat: np.ndarray | None = None
    diagnostics: dict[str, Any] = field(default_factory=dict)

    @property
    def p(self) -> int:
        return self.sigma.shape[0]


def numerical_rank(m: np.ndarray, rel_tol: float = 1e-8) -> int:
    """Count eigenvalues above ``rel_tol`` times the largest one."""
    values = np.linalg.eigvalsh(m)
    top = values[-1]
    if top <= 0:
        return 0
    return int(np.sum(values > rel_tol * top))


def embed_block(block: np.ndarray, idx: np.ndarray, p: int) -> np.ndarray:
    """Place ``block`` at rows/columns ``idx`` of a ``p x p`` zero matrix."""
    out = np.zeros((p, p))
    out[np.ix_(idx, idx)] = block
    return out
