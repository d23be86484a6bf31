# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops; see ``_pykernels`` for the reference semantics."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, INFINITY

cnp.import_array()


def ml_decode(const double[:, ::1] y, const double[:, ::1] h, const double[:, ::1] points):
    cdef Py_ssize_t n = y.shape[0], q = points.shape[0]
    cdef Py_ssize_t t, k, best
    cdef double d0, d1, metric, best_metric
    out = np.empty(n, dtype=np.int64)
    cdef cnp.int64_t[::1] res = out
    with nogil:
        for t in range(n):
            best = 0
            best_metric = INFINITY
            for k in range(q):
                d0 = y[t, 0] - h[t, 0] * points[k, 0]
                d1 = y[t, 1] - h[t, 1] * points[k, 1]
                metric = d0 * d0 + d1 * d1
                if metric < best_metric:
                    best_metric = metric
                    best = k
            res[t] = best
    return out


def pair_stats(const double[:, ::1] points, double snr):
    cdef Py_ssize_t q = points.shape[0]
    cdef Py_ssize_t a, b
    cdef double g0, g1, s, r0, r1, dl, pl
    cdef double total = 0.0, min_pl = INFINITY
    with nogil:
        for a in range(q):
            for b in range(a + 1, q):
                g0 = points[a, 0] - points[b, 0]
                g1 = points[a, 1] - points[b, 1]
                g0 = snr * g0 * g0
                g1 = snr * g1 * g1
                s = 1.0 / ((1.0 + g0) * (1.0 + g1))
                r0 = g0 / (1.0 + g0)
                r1 = g1 / (1.0 + g1)
                dl = sqrt(r0 if r0 > r1 else r1)
                pl = 0.25 * (1.0 / (1.0 + dl) + 1.0 / ((1.0 + dl) * (1.0 + dl))) * s
                total += s
                if pl < min_pl:
                    min_pl = pl
    return 2.0 * total, min_pl
