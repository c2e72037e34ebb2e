import numpy as np
import pytest

from mvfapprox.sampling import rng_from_seed


@pytest.fixture
def rng():
    return rng_from_seed(0xC0FFEE)


def det_cofactor(a):
    """Determinant by cofactor expansion along the first row.

    Deliberately naive so it shares nothing with the library's minor or
    backend code paths; used as an independent oracle.
    """
    a = np.asarray(a, dtype=np.float64)
    n = a.shape[0]
    if n == 1:
        return float(a[0, 0])
    total = 0.0
    for j in range(n):
        sub = np.delete(np.delete(a, 0, axis=0), j, axis=1)
        total += (-1.0) ** j * a[0, j] * det_cofactor(sub)
    return total


def det_lu_pivot(a):
    """Determinant via partial-pivot elimination, written out longhand."""
    a = np.array(a, dtype=np.float64, copy=True)
    n = a.shape[0]
    sign = 1.0
    for k in range(n):
        p = k + int(np.argmax(np.abs(a[k:, k])))
        if a[p, k] == 0.0:
            return 0.0
        if p != k:
            a[[k, p]] = a[[p, k]]
            sign = -sign
        for i in range(k + 1, n):
            f = a[i, k] / a[k, k]
            a[i, k:] -= f * a[k, k:]
    return sign * float(np.prod(np.diag(a)))


def rot2(angle):
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s], [s, c]])


def rodrigues(axis, angle):
    """Rotation about a unit axis, the classical closed form."""
    axis = np.asarray(axis, dtype=np.float64)
    axis = axis / np.linalg.norm(axis)
    k = np.array(
        [
            [0.0, -axis[2], axis[1]],
            [axis[2], 0.0, -axis[0]],
            [-axis[1], axis[0], 0.0],
        ]
    )
    return np.eye(3) + np.sin(angle) * k + (1.0 - np.cos(angle)) * (k @ k)
