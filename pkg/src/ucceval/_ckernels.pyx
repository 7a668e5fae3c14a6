# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the kernels in ``_pykernels``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs

cnp.import_array()


def scale_sums(const double[::1] err, const double[::1] lower,
               const double[::1] upper, const double[::1] crit, ks):
    cdef const double[::1] kv = np.ascontiguousarray(ks, dtype=np.float64)
    cdef Py_ssize_t m = kv.shape[0]
    cdef Py_ssize_t n = err.shape[0]
    n_missed_a = np.empty(m, dtype=np.int64)
    exc_a = np.empty(m, dtype=np.float64)
    dfc_a = np.empty(m, dtype=np.float64)
    cdef cnp.int64_t[::1] n_missed = n_missed_a
    cdef double[::1] exc = exc_a
    cdef double[::1] dfc = dfc_a
    cdef Py_ssize_t j, i
    cdef double k, lo_gap, hi_gap, s, e, d
    cdef cnp.int64_t miss
    with nogil:
        for j in range(m):
            k = kv[j]
            miss = 0
            e = 0.0
            d = 0.0
            for i in range(n):
                lo_gap = err[i] + k * lower[i]
                hi_gap = k * upper[i] - err[i]
                if crit[i] <= k:
                    s = lo_gap if lo_gap < hi_gap else hi_gap
                    if s > 0.0:
                        e += s
                else:
                    miss += 1
                    lo_gap = fabs(lo_gap)
                    hi_gap = fabs(hi_gap)
                    d += lo_gap if lo_gap < hi_gap else hi_gap
            n_missed[j] = miss
            exc[j] = e
            dfc[j] = d
    return n_missed_a, exc_a, dfc_a
