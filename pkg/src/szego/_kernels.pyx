# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner kernels.

Two hot paths live here: the projected cubic product (a full
self-convolution followed by a correlation against the conjugate
coefficients) and the fixed-step RK4 loop built on top of it.  Both
are exact coefficient arithmetic, no transforms.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

ctypedef double complex cplx

cdef extern from "complex.h" nogil:
    double complex conj(double complex)


cdef void _self_convolve(const cplx[::1] u, cplx[::1] w) nogil:
    # w[m] = sum_{i+j=m} u[i] u[j], m = 0 .. 2K-2
    cdef Py_ssize_t K = u.shape[0]
    cdef Py_ssize_t m, i, lo, hi
    cdef cplx acc
    for m in range(2 * K - 1):
        lo = m - K + 1
        if lo < 0:
            lo = 0
        hi = m
        if hi > K - 1:
            hi = K - 1
        acc = 0
        for i in range(lo, hi + 1):
            acc = acc + u[i] * u[m - i]
        w[m] = acc


cdef void _project_correlate(const cplx[::1] w, const cplx[::1] u,
                             cplx[::1] out) nogil:
    # out[m] = sum_k w[m+k] conj(u[k]); the analytic part of (u*u) ubar
    cdef Py_ssize_t K = u.shape[0]
    cdef Py_ssize_t full = w.shape[0]
    cdef Py_ssize_t m, k, kmax
    cdef cplx acc
    for m in range(out.shape[0]):
        kmax = full - 1 - m
        if kmax > K - 1:
            kmax = K - 1
        acc = 0
        for k in range(kmax + 1):
            acc = acc + w[m + k] * conj(u[k])
        out[m] = acc


def cubic_projected(const cplx[::1] u, Py_ssize_t out_len):
    """Coefficients 0..out_len-1 of the analytic projection of |u|^2 u."""
    cdef Py_ssize_t K = u.shape[0]
    w_arr = np.empty(2 * K - 1, dtype=np.complex128)
    out_arr = np.zeros(out_len, dtype=np.complex128)
    cdef cplx[::1] w = w_arr
    cdef cplx[::1] out = out_arr
    cdef Py_ssize_t eff = out_len
    if eff > 2 * K - 1:
        eff = 2 * K - 1
    _self_convolve(u, w)
    _project_correlate(w, u, out[:eff])
    return out_arr


cdef void _rhs(const cplx[::1] u, cplx[::1] w, cplx[::1] out) nogil:
    # out = -i * (analytic projection of |u|^2 u), truncated to len(u)
    cdef Py_ssize_t K = u.shape[0]
    cdef Py_ssize_t m
    _self_convolve(u, w)
    _project_correlate(w, u, out)
    for m in range(K):
        out[m] = out[m] * (-1j)


def rk4_evolve(const cplx[::1] u0, double dt, Py_ssize_t nsteps):
    """Advance the Galerkin-truncated flow by nsteps fixed RK4 steps."""
    cdef Py_ssize_t K = u0.shape[0]
    u_arr = np.array(u0, dtype=np.complex128, copy=True)
    cdef cplx[::1] u = u_arr
    w_arr = np.empty(2 * K - 1, dtype=np.complex128)
    k1_arr = np.empty(K, dtype=np.complex128)
    k2_arr = np.empty(K, dtype=np.complex128)
    k3_arr = np.empty(K, dtype=np.complex128)
    k4_arr = np.empty(K, dtype=np.complex128)
    tmp_arr = np.empty(K, dtype=np.complex128)
    cdef cplx[::1] w = w_arr
    cdef cplx[::1] k1 = k1_arr
    cdef cplx[::1] k2 = k2_arr
    cdef cplx[::1] k3 = k3_arr
    cdef cplx[::1] k4 = k4_arr
    cdef cplx[::1] tmp = tmp_arr
    cdef Py_ssize_t step, j
    cdef double half = 0.5 * dt
    cdef double sixth = dt / 6.0
    with nogil:
        for step in range(nsteps):
            _rhs(u, w, k1)
            for j in range(K):
                tmp[j] = u[j] + half * k1[j]
            _rhs(tmp, w, k2)
            for j in range(K):
                tmp[j] = u[j] + half * k2[j]
            _rhs(tmp, w, k3)
            for j in range(K):
                tmp[j] = u[j] + dt * k3[j]
            _rhs(tmp, w, k4)
            for j in range(K):
                u[j] = u[j] + sixth * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j])
    return u_arr
