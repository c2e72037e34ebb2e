"""Numpy implementations of the dense kernels.

This is the fallback backend used when the compiled extension is not
available. Contracts match ``_fastkernels`` exactly:

- ``eigh(a)``        -> (w ascending, V with columns as eigenvectors)
- ``qr(a)``          -> (Q, R) with no sign convention on diag(R)
- ``ldu(a, tau)``    -> (L, d, U, status); status is the 1-based index of the
                        first leading principal minor with \\|p_i\\| <= tau,
                        or 0 on success
- ``cholesky(a)``    -> (L, status); status is the 1-based failing pivot
                        index, or 0 on success

Inputs are square C-contiguous float64 arrays; callers validate shape.
"""

import numpy as np

NAME = "python"


def eigh(a):
    w, v = np.linalg.eigh(a)
    return w, v


def qr(a):
    q, r = np.linalg.qr(a)
    return q, r


def ldu(a, tau):
    n = a.shape[0]
    upper = a.astype(np.float64, copy=True)
    lower = np.eye(n)
    minor = 1.0
    for k in range(n):
        pivot = upper[k, k]
        minor *= pivot
        if abs(minor) <= tau:
            return lower, np.diag(upper).copy(), upper, k + 1
        if k < n - 1:
            mult = upper[k + 1 :, k] / pivot
            lower[k + 1 :, k] = mult
            upper[k + 1 :, k:] -= np.outer(mult, upper[k, k:])
            upper[k + 1 :, k] = 0.0
    d = np.diag(upper).copy()
    unit_upper = upper / d[:, None]
    return lower, d, unit_upper, 0


def _cholesky_slow(a):
    # Only used to locate the failing pivot after LAPACK rejects the input.
    n = a.shape[0]
    lower = np.zeros_like(a)
    for j in range(n):
        s = a[j, j] - np.dot(lower[j, :j], lower[j, :j])
        if s <= 0.0:
            return lower, j + 1
        lower[j, j] = np.sqrt(s)
        if j + 1 < n:
            lower[j + 1 :, j] = (
                a[j + 1 :, j] - lower[j + 1 :, :j] @ lower[j, :j]
            ) / lower[j, j]
    return lower, 0


def cholesky(a):
    try:
        return np.linalg.cholesky(a), 0
    except np.linalg.LinAlgError:
        return _cholesky_slow(a)
