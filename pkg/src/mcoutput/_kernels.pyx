# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops: sampler recursions and the direct spectral-variance sum.

Arithmetic order is fixed and mirrored exactly by the pure-numpy fallback in
``_kernels_py`` so the two backends agree (bitwise for the scalar recursions).
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp, sqrt

cnp.import_array()


def var1_recurrence(const double[:, ::1] phi, const double[::1] start,
                    const double[:, ::1] eps, double[:, ::1] out):
    """Fill ``out`` (n, p) with the VAR(1) path started at ``start``.

    ``eps`` holds the n-1 innovation vectors; out[0] = start and
    out[t] = phi @ out[t-1] + eps[t-1] with a fixed accumulation order:
    the innovation first, then the phi columns left to right.
    """
    cdef Py_ssize_t n = out.shape[0]
    cdef Py_ssize_t p = out.shape[1]
    cdef Py_ssize_t t, i, j
    cdef double xj
    if phi.shape[0] != p or phi.shape[1] != p or start.shape[0] != p:
        raise ValueError("dimension mismatch in var1_recurrence")
    if eps.shape[0] != n - 1 or eps.shape[1] != p:
        raise ValueError("eps must have shape (n - 1, p)")
    for i in range(p):
        out[0, i] = start[i]
    for t in range(1, n):
        for i in range(p):
            out[t, i] = eps[t - 1, i]
        for j in range(p):
            xj = out[t - 1, j]
            for i in range(p):
                out[t, i] += phi[i, j] * xj
    return None


cdef inline double _mixture_density(double x, double w1, double mu1, double v1,
                                    double norm1, double w2, double mu2,
                                    double v2, double norm2) nogil:
    cdef double d1 = x - mu1
    cdef double d2 = x - mu2
    return (w1 * norm1 * exp(-0.5 * d1 * d1 / v1)
            + w2 * norm2 * exp(-0.5 * d2 * d2 / v2))


def rwm_mixture_chain(double start, double sd, const double[::1] z,
                      const double[::1] u,
                      double w1, double mu1, double v1,
                      double w2, double mu2, double v2,
                      double[::1] out):
    """Random-walk Metropolis for a two-component Gaussian mixture.

    ``z`` are standard-normal proposal increments, ``u`` uniform accept draws;
    the n visited states (start excluded) land in ``out``. Returns the number
    of accepted moves.
    """
    cdef Py_ssize_t n = out.shape[0]
    cdef Py_ssize_t t
    cdef double x = start
    cdef double y, fx, fy
    cdef double pi2 = 6.283185307179586476925287
    cdef double norm1 = 1.0 / sqrt(pi2 * v1)
    cdef double norm2 = 1.0 / sqrt(pi2 * v2)
    cdef long accepted = 0
    if z.shape[0] != n or u.shape[0] != n:
        raise ValueError("z and u must have length n")
    fx = _mixture_density(x, w1, mu1, v1, norm1, w2, mu2, v2, norm2)
    for t in range(n):
        y = x + sd * z[t]
        fy = _mixture_density(y, w1, mu1, v1, norm1, w2, mu2, v2, norm2)
        if u[t] * fx < fy:
            x = y
            fx = fy
            accepted += 1
        out[t] = x
    return accepted


def gibbs_boomerang_chain(double x0, double y0, const double[:, ::1] z,
                          double a, double b, double c,
                          double[:, ::1] out):
    """Deterministic-scan Gibbs sweeps for the bivariate boomerang target.

    Each sweep updates x from its Gaussian conditional given y, then y given
    the new x, consuming one standard-normal pair from ``z`` per sweep; the
    state after each full sweep lands in ``out`` (n, 2).
    """
    cdef Py_ssize_t n = out.shape[0]
    cdef Py_ssize_t t
    cdef double x = x0
    cdef double y = y0
    cdef double prec
    if z.shape[0] != n or z.shape[1] != 2 or out.shape[1] != 2:
        raise ValueError("z and out must have shape (n, 2)")
    for t in range(n):
        prec = a * y * y + 1.0
        x = (b * y + c) / prec + z[t, 0] / sqrt(prec)
        prec = a * x * x + 1.0
        y = (b * x + c) / prec + z[t, 1] / sqrt(prec)
        out[t, 0] = x
        out[t, 1] = y
    return None


def sv_accumulate(const double[:, ::1] data, const double[::1] weights):
    """Direct O(b_n * n * p^2) lag-window sum over centered data.

    Returns the unnormalized matrix sum_k w_k * (G_k + G_k^T) (k >= 1) plus
    w_0 * G_0, where G_k = sum_t data[t]^T data[t+k]; the caller divides by n.
    """
    cdef Py_ssize_t n = data.shape[0]
    cdef Py_ssize_t p = data.shape[1]
    cdef Py_ssize_t bn = weights.shape[0]
    cdef Py_ssize_t k, t, i, j
    cdef double w
    out_arr = np.zeros((p, p))
    cdef double[:, ::1] out = out_arr
    for t in range(n):
        for i in range(p):
            for j in range(p):
                out[i, j] += data[t, i] * data[t, j]
    for k in range(1, bn):
        w = weights[k]
        for t in range(n - k):
            for i in range(p):
                for j in range(p):
                    out[i, j] += w * (data[t, i] * data[t + k, j]
                                      + data[t + k, i] * data[t, j])
    return out_arr
