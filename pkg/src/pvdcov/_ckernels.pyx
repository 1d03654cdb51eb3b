# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the O(n p^2) moment and thresholding passes.

Every function here has a drop-in twin in :mod:`pvdcov._pykernels`.
"""

import numpy as np
cimport numpy as cnp

cnp.import_array()


def theta_kernel(double[:, ::1] at, double[:, ::1] offset):
    """theta[i, j] = mean_k (at[i, k] * at[j, k] - offset[i, j])**2, symmetric fill.

    ``at`` is the transposed data matrix (p x n, C-contiguous).
    """
    cdef Py_ssize_t p = at.shape[0]
    cdef Py_ssize_t n = at.shape[1]
    cdef Py_ssize_t i, j, k
    cdef double s, d, c
    out = np.empty((p, p), dtype=np.float64)
    cdef double[:, ::1] res = out
    for i in range(p):
        for j in range(i, p):
            c = offset[i, j]
            s = 0.0
            for k in range(n):
                d = at[i, k] * at[j, k] - c
                s += d * d
            s /= n
            res[i, j] = s
            res[j, i] = s
    return out


def row_energy_kernel(double[:, ::1] m):
    """r[i] = sum_j m[i, j]**2 / p."""
    cdef Py_ssize_t p = m.shape[0]
    cdef Py_ssize_t i, j
    cdef double s
    out = np.empty(p, dtype=np.float64)
    cdef double[::1] r = out
    for i in range(p):
        s = 0.0
        for j in range(m.shape[1]):
            s += m[i, j] * m[i, j]
        r[i] = s / p
    return out


def threshold_kernel(double[:, ::1] m, double[:, ::1] tau,
                     cnp.uint8_t[:, ::1] mask, bint soft_rule, bint preserve_diagonal):
    """Entrywise soft/hard thresholding of the entries selected by ``mask``."""
    cdef Py_ssize_t p = m.shape[0]
    cdef Py_ssize_t i, j
    cdef double x, t, a
    out = np.array(m, dtype=np.float64, copy=True)
    cdef double[:, ::1] res = out
    for i in range(p):
        for j in range(p):
            if not mask[i, j]:
                continue
            if i == j and preserve_diagonal:
                continue
            x = m[i, j]
            t = tau[i, j]
            a = x if x >= 0 else -x
            if soft_rule:
                if a <= t:
                    res[i, j] = 0.0
                elif x > 0:
                    res[i, j] = a - t
                else:
                    res[i, j] = t - a
            else:
                if not a > t:
                    res[i, j] = 0.0
    return out
