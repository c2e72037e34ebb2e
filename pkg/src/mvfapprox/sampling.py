"""Deterministic random matrix generators for fuzz checks and probes.

Every generator takes an explicit ``numpy.random.Generator``; nothing here
touches global state. "Valid" inputs are drawn comfortably inside their
class so that decomposition and metric tolerances are meaningful rather
than borderline.
"""

import numpy as np

from .core import MatrixClass, check_class

DEFAULT_SEED = 0x5EED


def rng_from_seed(seed=DEFAULT_SEED):
    return np.random.default_rng(seed)


def random_so(n, rng):
    """Haar-like rotation via QR of a Gaussian matrix, det forced to +1."""
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def random_spd(n, rng, eig_low=0.2, eig_high=5.0, min_gap=0.0):
    """SPD matrix with eigenvalues in a bounded band.

    ``min_gap`` forces a spectral separation, which keeps sorted spectral
    factors stable under tiny perturbations.
    """
    if min_gap > 0.0:
        steps = rng.uniform(min_gap, (eig_high - eig_low) / n, size=n)
        eigs = eig_low + np.cumsum(steps)
    else:
        eigs = rng.uniform(eig_low, eig_high, size=n)
    q = random_so(n, rng)
    a = (q * eigs) @ q.T
    return 0.5 * (a + a.T)


def random_det_pos(n, rng, max_cond=1e4):
    """Invertible matrix with positive determinant and bounded conditioning."""
    while True:
        a = rng.standard_normal((n, n))
        sv = np.linalg.svd(a, compute_uv=False)
        if sv[0] / sv[-1] > max_cond:
            continue
        if np.linalg.det(a) < 0:
            a[0] = -a[0]
        return a


def random_invertible(n, rng, max_cond=1e4):
    """Invertible matrix of either determinant sign, bounded conditioning."""
    while True:
        a = rng.standard_normal((n, n))
        sv = np.linalg.svd(a, compute_uv=False)
        if sv[0] / sv[-1] <= max_cond:
            return a


def random_unit_lower(n, rng, scale=1.0):
    a = np.eye(n)
    a += np.tril(rng.standard_normal((n, n)), -1) * scale
    return a


def random_unit_upper(n, rng, scale=1.0):
    return random_unit_lower(n, rng, scale).T


def random_lower_pos_diag(n, rng, diag_low=0.3, diag_high=3.0):
    a = np.tril(rng.standard_normal((n, n)), -1)
    a += np.diag(rng.uniform(diag_low, diag_high, size=n))
    return a


def random_nonzero_minors(n, rng, sign_pattern=None):
    """Matrix whose leading principal minors are all comfortably nonzero.

    Built as L D U with unit triangular L, U, so the minor signs are the
    prefix products of the chosen diagonal signs.
    """
    if sign_pattern is None:
        signs = rng.choice([-1.0, 1.0], size=n)
    else:
        signs = np.asarray(sign_pattern, dtype=np.float64)
    d = signs * rng.uniform(0.4, 2.5, size=n)
    lo = random_unit_lower(n, rng, scale=0.6)
    up = random_unit_upper(n, rng, scale=0.6)
    return lo @ np.diag(d) @ up


def random_for_class(matrix_class, n, rng):
    """A generator dispatcher used by probes and check suites."""
    make = {
        MatrixClass.GENERAL_INVERTIBLE: lambda: random_det_pos(n, rng),
        MatrixClass.SPD: lambda: random_spd(n, rng),
        MatrixClass.SO: lambda: random_so(n, rng),
        MatrixClass.UNIT_LOWER_TRIANGULAR: lambda: random_unit_lower(n, rng),
        MatrixClass.UNIT_UPPER_TRIANGULAR: lambda: random_unit_upper(n, rng),
        MatrixClass.LOWER_TRIANGULAR_POS_DIAG: lambda: random_lower_pos_diag(n, rng),
        MatrixClass.UPPER_TRIANGULAR_POS_DIAG: lambda: random_lower_pos_diag(n, rng).T,
        MatrixClass.DIAGONAL: lambda: np.diag(rng.uniform(0.2, 5.0, size=n)),
        MatrixClass.DIAGONAL_NONZERO: lambda: np.diag(
            rng.choice([-1.0, 1.0], size=n) * rng.uniform(0.2, 5.0, size=n)
        ),
        MatrixClass.POSITIVE_SCALAR_1X1: lambda: np.array(
            [[rng.uniform(0.2, 5.0)]]
        ),
    }[matrix_class]
    a = make()
    assert check_class(a, matrix_class), matrix_class
    return a
