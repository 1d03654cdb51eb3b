"""Pure-NumPy implementations of the compiled kernels (same signatures)."""

import numpy as np


def theta_kernel(at: np.ndarray, offset: np.ndarray) -> np.ndarray:
    p, n = at.shape
    out = np.empty((p, p))
    for i in range(p):
        d = at[i] * at[i:] - offset[i, i:, None]
        row = np.einsum("jk,jk->j", d, d) / n
        out[i, i:] = row
        out[i:, i] = row
    return out


def row_energy_kernel(m: np.ndarray) -> np.ndarray:
    return np.einsum("ij,ij->i", m, m) / m.shape[0]


def threshold_kernel(m, tau, mask, soft_rule, preserve_diagonal):
    sel = mask.astype(bool)
    if preserve_diagonal:
        np.fill_diagonal(sel, False)
    a = np.abs(m)
    if soft_rule:
        shrunk = np.sign(m) * np.maximum(a - tau, 0.0)
    else:
        shrunk = np.where(a > tau, m, 0.0)
    return np.where(sel, shrunk, m)
