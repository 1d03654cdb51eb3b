"""Slow reference implementations used to certify the fast code paths.

Everything here is written from the defining formulas with explicit loops
or an independent algorithm, and is only meant for small inputs.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = [
    "covariance_loop",
    "theta_loop",
    "row_energy_loop",
    "threshold_loop",
    "svt_eigen",
    "lorec_reference",
]


def covariance_loop(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    n, p = x.shape
    mean = [sum(x[k, i] for k in range(n)) / n for i in range(p)]
    out = np.empty((p, p))
    for i in range(p):
        for j in range(p):
            out[i, j] = sum((x[k, i] - mean[i]) * (x[k, j] - mean[j]) for k in range(n)) / n
    return out


def theta_loop(x, variant: str = "paper") -> np.ndarray:
    """``theta_ij`` by the defining double sum.

    ``paper`` centers the products with the product of means,
    ``centered`` uses products of centered values.
    """
    x = np.asarray(x, dtype=float)
    n, p = x.shape
    mean = [sum(x[k, i] for k in range(n)) / n for i in range(p)]
    sigma = covariance_loop(x)
    out = np.empty((p, p))
    for i in range(p):
        for j in range(p):
            acc = 0.0
            for k in range(n):
                if variant == "paper":
                    d = x[k, i] * x[k, j] - mean[i] * mean[j] - sigma[i, j]
                else:
                    d = (x[k, i] - mean[i]) * (x[k, j] - mean[j]) - sigma[i, j]
                acc += d * d
            out[i, j] = acc / n
    return out


def row_energy_loop(m) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    p = m.shape[0]
    return np.array([sum(m[i, j] ** 2 for j in range(p)) / p for i in range(p)])


def threshold_loop(m, tau, mask=None, soft: bool = True, preserve_diagonal: bool = True) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    p = m.shape[0]
    tau = np.broadcast_to(np.asarray(tau, dtype=float), (p, p))
    out = m.copy()
    for i in range(p):
        for j in range(p):
            if (i == j and preserve_diagonal) or (mask is not None and not mask[i, j]):
                continue
            v, t = m[i, j], tau[i, j]
            if soft:
                out[i, j] = math.copysign(max(abs(v) - t, 0.0), v)
            else:
                out[i, j] = v if abs(v) > t else 0.0
    return out


def svt_eigen(m, lam: float) -> np.ndarray:
    """Prox of ``lam * sum |eig|``: shrink every eigenvalue towards zero by ``lam``."""
    w, v = np.linalg.eigh((np.asarray(m, dtype=float) + np.asarray(m, dtype=float).T) / 2.0)
    shrunk = np.sign(w) * np.maximum(np.abs(w) - lam, 0.0)
    return (v * shrunk) @ v.T


def lorec_reference(sigma, lam: float, rho: float, iters: int = 5000) -> tuple[np.ndarray, np.ndarray]:
    """FISTA on the joint variable ``(L, S)``.

    The smooth part ``0.5 ||sigma - L - S||_F^2`` has a gradient that is
    2-Lipschitz in ``(L, S)``, so the step is 1/2 and both proximal maps act
    in parallel. This is a different algorithm from the block-coordinate
    solver and converges at rate ``O(1/k^2)`` in objective.
    """
    sigma = (np.asarray(sigma, dtype=float) + np.asarray(sigma, dtype=float).T) / 2.0
    low = np.zeros_like(sigma)
    sparse = np.zeros_like(sigma)
    yl, ys = low, sparse
    t = 1.0
    step = 0.5
    for _ in range(iters):
        grad = yl + ys - sigma
        new_low = svt_eigen(yl - step * grad, step * lam)
        z = ys - step * grad
        new_sparse = np.sign(z) * np.maximum(np.abs(z) - step * rho, 0.0)
        t_next = (1.0 + math.sqrt(1.0 + 4.0 * t * t)) / 2.0
        beta = (t - 1.0) / t_next
        yl = new_low + beta * (new_low - low)
        ys = new_sparse + beta * (new_sparse - sparse)
        low, sparse, t = new_low, new_sparse, t_next
    return low, sparse
