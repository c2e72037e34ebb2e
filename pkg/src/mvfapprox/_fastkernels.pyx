# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled dense kernels for small matrices.

Same contracts as ``_pykernels``; see that module for the documented
signatures. These are written for n in the single digits, where avoiding
LAPACK dispatch overhead matters inside grid scans and fuzz loops.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport copysign, fabs, sqrt

cnp.import_array()

NAME = "cython"


def eigh(double[:, ::1] a):
    """Cyclic Jacobi eigendecomposition of a symmetric matrix.

    Returns eigenvalues in ascending order and the matching orthonormal
    eigenvector columns. Convergence is unconditional for symmetric input.
    """
    cdef Py_ssize_t n = a.shape[0]
    s_arr = np.array(a, dtype=np.float64, copy=True)
    v_arr = np.eye(n, dtype=np.float64)
    w_arr = np.empty(n, dtype=np.float64)
    cdef double[:, ::1] s = s_arr
    cdef double[:, ::1] v = v_arr
    cdef double[::1] w = w_arr
    cdef Py_ssize_t i, j, p, q, sweep, imin
    cdef double frob, off, apq, app, aqq, theta, t, c, sn, sip, siq, tmp

    frob = 0.0
    for i in range(n):
        for j in range(n):
            frob += s[i, j] * s[i, j]
    frob = sqrt(frob)
    if frob == 0.0:
        for i in range(n):
            w[i] = 0.0
        return w_arr, v_arr

    for sweep in range(64):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                off += s[p, q] * s[p, q]
        off = sqrt(2.0 * off)
        if off <= 1e-15 * frob:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = s[p, q]
                if fabs(apq) <= 1e-18 * frob:
                    continue
                app = s[p, p]
                aqq = s[q, q]
                theta = (aqq - app) / (2.0 * apq)
                if theta >= 0.0:
                    t = 1.0 / (theta + sqrt(1.0 + theta * theta))
                else:
                    t = -1.0 / (-theta + sqrt(1.0 + theta * theta))
                c = 1.0 / sqrt(1.0 + t * t)
                sn = t * c
                s[p, p] = app - t * apq
                s[q, q] = aqq + t * apq
                s[p, q] = 0.0
                s[q, p] = 0.0
                for i in range(n):
                    if i != p and i != q:
                        sip = s[i, p]
                        siq = s[i, q]
                        s[i, p] = c * sip - sn * siq
                        s[p, i] = s[i, p]
                        s[i, q] = sn * sip + c * siq
                        s[q, i] = s[i, q]
                for i in range(n):
                    sip = v[i, p]
                    siq = v[i, q]
                    v[i, p] = c * sip - sn * siq
                    v[i, q] = sn * sip + c * siq

    for i in range(n):
        w[i] = s[i, i]
    # ascending selection sort, swapping eigenvector columns alongside
    for i in range(n - 1):
        imin = i
        for j in range(i + 1, n):
            if w[j] < w[imin]:
                imin = j
        if imin != i:
            tmp = w[i]
            w[i] = w[imin]
            w[imin] = tmp
            for j in range(n):
                tmp = v[j, i]
                v[j, i] = v[j, imin]
                v[j, imin] = tmp
    return w_arr, v_arr


def qr(double[:, ::1] a):
    """Householder QR of a square matrix; no sign convention on diag(R)."""
    cdef Py_ssize_t n = a.shape[0]
    r_arr = np.array(a, dtype=np.float64, copy=True)
    q_arr = np.eye(n, dtype=np.float64)
    work = np.empty(n, dtype=np.float64)
    cdef double[:, ::1] r = r_arr
    cdef double[:, ::1] q = q_arr
    cdef double[::1] v = work
    cdef Py_ssize_t i, j, k
    cdef double nrm, alpha, beta, acc

    for k in range(n - 1):
        nrm = 0.0
        for i in range(k, n):
            nrm += r[i, k] * r[i, k]
        nrm = sqrt(nrm)
        if nrm == 0.0:
            continue
        alpha = -copysign(nrm, r[k, k])
        for i in range(k, n):
            v[i] = r[i, k]
        v[k] -= alpha
        acc = 0.0
        for i in range(k, n):
            acc += v[i] * v[i]
        if acc == 0.0:
            continue
        beta = 2.0 / acc
        for j in range(k, n):
            acc = 0.0
            for i in range(k, n):
                acc += v[i] * r[i, j]
            acc *= beta
            for i in range(k, n):
                r[i, j] -= acc * v[i]
        for i in range(n):
            acc = 0.0
            for j in range(k, n):
                acc += q[i, j] * v[j]
            acc *= beta
            for j in range(k, n):
                q[i, j] -= acc * v[j]
    for j in range(n):
        for i in range(j + 1, n):
            r[i, j] = 0.0
    return q_arr, r_arr


def ldu(double[:, ::1] a, double tau):
    """Elimination without pivoting into unit-lower, diagonal, unit-upper."""
    cdef Py_ssize_t n = a.shape[0]
    u_arr = np.array(a, dtype=np.float64, copy=True)
    l_arr = np.eye(n, dtype=np.float64)
    d_arr = np.empty(n, dtype=np.float64)
    cdef double[:, ::1] u = u_arr
    cdef double[:, ::1] lo = l_arr
    cdef double[::1] d = d_arr
    cdef Py_ssize_t i, j, k
    cdef double pivot, minor, mult

    minor = 1.0
    for k in range(n):
        pivot = u[k, k]
        minor *= pivot
        if fabs(minor) <= tau:
            for i in range(n):
                d[i] = u[i, i]
            return l_arr, d_arr, u_arr, k + 1
        for i in range(k + 1, n):
            mult = u[i, k] / pivot
            lo[i, k] = mult
            u[i, k] = 0.0
            for j in range(k + 1, n):
                u[i, j] -= mult * u[k, j]
    for k in range(n):
        d[k] = u[k, k]
        for j in range(k, n):
            u[k, j] /= d[k]
    return l_arr, d_arr, u_arr, 0


def cholesky(double[:, ::1] a):
    """Lower Cholesky factor; fails with the 1-based pivot index if not PD."""
    cdef Py_ssize_t n = a.shape[0]
    l_arr = np.zeros((n, n), dtype=np.float64)
    cdef double[:, ::1] lo = l_arr
    cdef Py_ssize_t i, j, k
    cdef double s

    for j in range(n):
        s = a[j, j]
        for k in range(j):
            s -= lo[j, k] * lo[j, k]
        if s <= 0.0:
            return l_arr, j + 1
        lo[j, j] = sqrt(s)
        for i in range(j + 1, n):
            s = a[i, j]
            for k in range(j):
                s -= lo[i, k] * lo[j, k]
            lo[i, j] = s / lo[j, j]
    return l_arr, 0
