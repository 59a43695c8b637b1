# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled pairwise kernels.

Same contracts as ``_pykernels``; both return unnormalized kernel values.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport exp, sin, fabs, M_PI

cnp.import_array()

cdef enum:
    GAUSSIAN = 0
    EPANECHNIKOV = 1


cdef inline double _sinc(double u) noexcept nogil:
    cdef double u2
    if fabs(u) < 1e-4:
        u2 = u * u
        return 1.0 - u2 / 6.0 + u2 * u2 / 120.0
    return sin(u) / u


cdef inline double _pair_kernel(const double[:, ::1] w, Py_ssize_t i, Py_ssize_t j,
                                Py_ssize_t p, double inv_h, int family) noexcept nogil:
    cdef Py_ssize_t k
    cdef double u, acc
    if family == GAUSSIAN:
        acc = 0.0
        for k in range(p):
            u = (w[i, k] - w[j, k]) * inv_h
            acc += u * u
        return exp(-0.5 * acc)
    acc = 1.0
    for k in range(p):
        u = (w[i, k] - w[j, k]) * inv_h
        if u >= 1.0 or u <= -1.0:
            return 0.0
        acc *= 0.75 * (1.0 - u * u)
    return acc


def kernel_gram(const double[:, ::1] w, double h, int family):
    cdef Py_ssize_t n = w.shape[0], p = w.shape[1], i, j
    cdef double inv_h = 1.0 / h, kv, k0
    out_arr = np.empty((n, n), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    k0 = 1.0 if family == GAUSSIAN else 0.75 ** p
    with nogil:
        for i in range(n):
            out[i, i] = k0
            for j in range(i + 1, n):
                kv = _pair_kernel(w, i, j, p, inv_h, family)
                out[i, j] = kv
                out[j, i] = kv
    return out_arr


def sinc_gram(const double[:, ::1] x):
    cdef Py_ssize_t n = x.shape[0], d = x.shape[1], i, j, k
    cdef double acc
    out_arr = np.empty((n, n), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    with nogil:
        for i in range(n):
            out[i, i] = 1.0
            for j in range(i + 1, n):
                acc = 1.0
                for k in range(d):
                    acc *= _sinc(M_PI * (x[i, k] - x[j, k]))
                out[i, j] = acc
                out[j, i] = acc
    return out_arr


def grid_sums(const double[:, ::1] w, const double[::1] y, const double[::1] hs, int family):
    """Row sums ``sum_k K((w_i - w_k)/h)`` and ``sum_k K(.) y_k`` for every ``h``.

    Nothing of size n x n is materialized.
    """
    cdef Py_ssize_t n = w.shape[0], p = w.shape[1], g, G = hs.shape[0], i, j, k
    cdef double kv, acc, u, k0
    s0_arr = np.zeros((G, n), dtype=np.float64)
    s1_arr = np.zeros((G, n), dtype=np.float64)
    inv2_arr = np.empty(G, dtype=np.float64)
    cdef double[:, ::1] s0 = s0_arr
    cdef double[:, ::1] s1 = s1_arr
    cdef double[::1] inv = inv2_arr
    for g in range(G):
        inv[g] = 1.0 / hs[g]
    k0 = 1.0 if family == GAUSSIAN else 0.75 ** p
    with nogil:
        for i in range(n):
            for g in range(G):
                s0[g, i] += k0
                s1[g, i] += k0 * y[i]
            for j in range(i + 1, n):
                if family == GAUSSIAN:
                    acc = 0.0
                    for k in range(p):
                        u = w[i, k] - w[j, k]
                        acc += u * u
                    for g in range(G):
                        kv = exp(-0.5 * acc * inv[g] * inv[g])
                        s0[g, i] += kv
                        s0[g, j] += kv
                        s1[g, i] += kv * y[j]
                        s1[g, j] += kv * y[i]
                else:
                    for g in range(G):
                        kv = _pair_kernel(w, i, j, p, inv[g], family)
                        s0[g, i] += kv
                        s0[g, j] += kv
                        s1[g, i] += kv * y[j]
                        s1[g, j] += kv * y[i]
    return s0_arr, s1_arr
