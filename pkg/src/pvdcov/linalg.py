"""Dense symmetric linear-algebra primitives shared by all estimators.

Symmetric matrices are plain ``numpy.ndarray`` objects of shape ``(p, p)``;
:func:`as_symmetric` is the single entry point that validates and, when
needed, symmetrizes them via ``(A + A.T) / 2``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError, InvalidInputError

__all__ = [
    "EigenDecomposition",
    "as_symmetric",
    "sym_eigen",
    "operator_norm",
    "inv_sqrt",
    "psd_sqrt",
    "svt",
    "eigenvalue_floor",
]

DEFAULT_FLOOR = 1e-12


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenpairs of a symmetric matrix.

    ``values`` are sorted non-increasing and ``vectors[:, i]`` is the unit
    eigenvector for ``values[i]``. The first coordinate of each eigenvector
    that is not negligible is positive, so results are reproducible.
    """

    values: np.ndarray
    vectors: np.ndarray

    def reconstruct(self, k: int | None = None) -> np.ndarray:
        """Return ``sum_{i<k} values[i] * v_i v_i^T`` (all pairs if ``k`` is None)."""
        v = self.vectors if k is None else self.vectors[:, :k]
        lam = self.values if k is None else self.values[:k]
        return _symmetrize((v * lam) @ v.T)


def _symmetrize(a: np.ndarray) -> np.ndarray:
    return (a + a.T) / 2.0


def as_symmetric(m, name: str = "matrix") -> np.ndarray:
    """Validate ``m`` as a finite square matrix and return an exactly symmetric copy."""
    a = np.asarray(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise InvalidInputError(f"{name} must be a non-empty square 2-D array, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidInputError(f"{name} contains non-finite entries")
    if np.array_equal(a, a.T):
        return a.copy()
    return _symmetrize(a)


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    # first coordinate above round-off level gets a positive sign
    mags = np.abs(vectors)
    tol = 1e-12 * mags.max(axis=0, initial=0.0)
    first = np.argmax(mags > tol[None, :], axis=0)
    signs = np.sign(vectors[first, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs[None, :]


def sym_eigen(m) -> EigenDecomposition:
    """Full eigendecomposition with descending eigenvalues and fixed sign convention."""
    a = as_symmetric(m)
    values, vectors = np.linalg.eigh(a)
    values = values[::-1].copy()
    vectors = _fix_signs(vectors[:, ::-1].copy())
    return EigenDecomposition(values, vectors)


def operator_norm(m) -> float:
    """Spectral norm ``max |lambda_i|`` of a symmetric matrix."""
    a = as_symmetric(m)
    values = np.linalg.eigvalsh(a)
    return float(max(abs(values[0]), abs(values[-1])))


def inv_sqrt(m, floor: float = DEFAULT_FLOOR) -> np.ndarray:
    """Regularized inverse square root ``V diag(max(lambda, floor)^{-1/2}) V^T``."""
    if not floor > 0:
        raise InvalidArgumentError(f"floor must be positive, got {floor}")
    a = as_symmetric(m)
    values, vectors = np.linalg.eigh(a)
    scale = np.maximum(values, floor) ** -0.5
    return _symmetrize((vectors * scale) @ vectors.T)


def psd_sqrt(m) -> np.ndarray:
    """Symmetric square root with negative eigenvalues clipped to zero."""
    a = as_symmetric(m)
    values, vectors = np.linalg.eigh(a)
    return _symmetrize((vectors * np.sqrt(np.clip(values, 0.0, None))) @ vectors.T)


def eigenvalue_floor(m, floor: float) -> tuple[np.ndarray, float]:
    """Clip the spectrum of ``m`` from below at ``floor``.

    Returns the repaired matrix and the original smallest eigenvalue. The
    input is returned unchanged (as a copy) when already above the floor.
    """
    a = as_symmetric(m)
    values, vectors = np.linalg.eigh(a)
    lam_min = float(values[0])
    if lam_min >= floor:
        return a, lam_min
    return _symmetrize((vectors * np.maximum(values, floor)) @ vectors.T), lam_min


def soft(x, tau):
    """Elementwise soft-thresholding ``sign(x) * max(|x| - tau, 0)``."""
    return np.sign(x) * np.maximum(np.abs(x) - tau, 0.0)


def svt(m, lam: float) -> np.ndarray:
    """Singular value thresholding for symmetric input (signed eigenvalue shrinkage).

    This is the proximal map of ``lam * ||X||_*`` restricted to symmetric
    matrices.
    """
    if lam < 0:
        raise InvalidArgumentError(f"lambda must be nonnegative, got {lam}")
    a = as_symmetric(m)
    if lam == 0:
        return a
    values, vectors = np.linalg.eigh(a)
    shrunk = soft(values, lam)
    keep = shrunk != 0
    if not keep.any():
        return np.zeros_like(a)
    v = vectors[:, keep]
    return _symmetrize((v * shrunk[keep]) @ v.T)
