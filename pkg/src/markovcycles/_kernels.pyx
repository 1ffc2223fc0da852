# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops: cycle pole sums and Eisenstein q-series.

Must stay drop-in compatible with _kernels_py (same signatures, same
summation order), which is the fallback selected at import time.
"""

import numpy as np


def pole_pair_sums(const double complex[::1] nodes, const double[::1] w, const double[::1] wt):
    """out[k] = sum_i (w[i]-wt[i]) / ((z_k-w[i]) (z_k-wt[i])), Kahan-compensated."""
    cdef Py_ssize_t k, i
    cdef Py_ssize_t nk = nodes.shape[0]
    cdef Py_ssize_t nl = w.shape[0]
    if wt.shape[0] != nl:
        raise ValueError("pole arrays must have equal length")
    out = np.empty(nk, dtype=np.complex128)
    cdef double complex[::1] out_v = out
    cdef double complex z, s, c, term, y, t
    for k in range(nk):
        z = nodes[k]
        s = 0
        c = 0
        for i in range(nl):
            term = (w[i] - wt[i]) / ((z - w[i]) * (z - wt[i]))
            y = term - c
            t = s + y
            c = (t - s) - y
            s = t
        out_v[k] = s
    return out


def eisenstein_pair(const double complex[::1] q, const double[::1] sigma3, const double[::1] sigma5,
                    Py_ssize_t nterms):
    """E4 and E6 partial sums: 1 + 240 sum sigma3(n) q^n, 1 - 504 sum sigma5(n) q^n."""
    cdef Py_ssize_t k, n
    cdef Py_ssize_t nk = q.shape[0]
    if nterms > sigma3.shape[0] or nterms > sigma5.shape[0]:
        raise ValueError("divisor tables shorter than requested term count")
    e4 = np.empty(nk, dtype=np.complex128)
    e6 = np.empty(nk, dtype=np.complex128)
    cdef double complex[::1] e4_v = e4
    cdef double complex[::1] e6_v = e6
    cdef double complex qn, s4, s6
    for k in range(nk):
        qn = 1
        s4 = 0
        s6 = 0
        for n in range(nterms):
            qn = qn * q[k]
            s4 = s4 + sigma3[n] * qn
            s6 = s6 + sigma5[n] * qn
        e4_v[k] = 1.0 + 240.0 * s4
        e6_v[k] = 1.0 - 504.0 * s6
    return e4, e6
