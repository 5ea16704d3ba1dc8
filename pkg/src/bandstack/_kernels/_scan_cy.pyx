# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled nearest-bin search kernels.

Same contract as _scan_py: identical inputs produce bitwise-identical
assignments in both lanes. Tie rule: update on <= so the largest index wins.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs, floor

LANE = "cython"


def nearest_indices_scan(targets, grid):
    """Brute-force reference: scan every grid point for every target."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] t = np.ascontiguousarray(targets, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] g = np.ascontiguousarray(grid, dtype=np.float64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] out = np.empty(t.shape[0], dtype=np.int64)
    cdef Py_ssize_t n = t.shape[0], m = g.shape[0]
    cdef Py_ssize_t j, k, best_k
    cdef double f, d, best
    for j in range(n):
        f = t[j]
        best = fabs(g[0] - f)
        best_k = 0
        for k in range(1, m):
            d = fabs(g[k] - f)
            if d <= best:
                best = d
                best_k = k
        out[j] = best_k
    return out


def nearest_indices_fast(targets, grid, double step):
    """Closed-form nearest index with a +/-2 exact re-check window.

    The window absorbs ulp-level disagreement between the integer guess and
    the actual linspace values; see _scan_py for the argument.
    """
    cdef cnp.ndarray[cnp.float64_t, ndim=1] t = np.ascontiguousarray(targets, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] g = np.ascontiguousarray(grid, dtype=np.float64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] out = np.empty(t.shape[0], dtype=np.int64)
    cdef Py_ssize_t n = t.shape[0], m = g.shape[0]
    cdef Py_ssize_t j, k, lo, hi, best_k
    cdef long long guess
    cdef double f, d, best
    for j in range(n):
        f = t[j]
        guess = <long long>floor(f / step + 0.5)
        lo = guess - 2
        if lo < 0:
            lo = 0
        hi = guess + 2
        if hi > m - 1:
            hi = m - 1
        best = fabs(g[lo] - f)
        best_k = lo
        for k in range(lo + 1, hi + 1):
            d = fabs(g[k] - f)
            if d <= best:
                best = d
                best_k = k
        out[j] = best_k
    return out
