"""Unique matrix decompositions with class-tagged factors.

Each routine rejects inputs outside its domain rather than regularizing,
records a relative reconstruction residual, and is deterministic: the same
input yields bitwise identical factors.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .core import (
    MatrixClass,
    as_matrix,
    frobenius_norm,
    principal_minors,
    resolve_tol,
    spd_sqrt,
)
from .errors import (
    DegenerateSpectrum,
    NonPositiveDeterminant,
    NotSPD,
    NotSymmetric,
    SelfCheckError,
    SingularInput,
    ZeroPrincipalMinor,
)

DEFAULT_PIVOT_TOL = 1e-12

# Eigenvalue gaps below this fraction of the norm make sorted spectral
# factors ill-determined; results are flagged, not rejected.
DEGENERATE_GAP = 1e-8


@dataclass(frozen=True)
class Factorization:
    """Ordered class-tagged factors whose product reconstructs the input."""

    factors: tuple
    residual: float
    meta: dict = field(default_factory=dict)

    @property
    def matrices(self):
        return tuple(m for m, _ in self.factors)

    @property
    def classes(self):
        return tuple(c for _, c in self.factors)

    @property
    def product(self):
        out = self.factors[0][0]
        for m, _ in self.factors[1:]:
            out = out @ m
        return out


def _finish(a, factors, meta=None):
    prod = factors[0][0]
    for m, _ in factors[1:]:
        prod = prod @ m
    scale = max(frobenius_norm(a), np.finfo(float).tiny)
    residual = float(np.linalg.norm(prod - a)) / scale
    return Factorization(tuple(factors), residual, dict(meta or {}))


def qr_pos(a, tol=None):
    """QR with a positive diagonal on R, unique for invertible input.

    The orthogonal factor is tagged SO only when its determinant is +1;
    det(Q) is recorded in ``meta["det_q"]`` either way.
    """
    a = as_matrix(a)
    tol = resolve_tol(tol)
    q, r = _backend.qr(a)
    scale = frobenius_norm(a)
    if scale == 0.0 or np.min(np.abs(np.diag(r))) <= tol * scale:
        raise SingularInput("qr_pos: input is singular within tolerance")
    signs = np.sign(np.diag(r))
    q = q * signs
    r = signs[:, None] * r
    det_q = 1.0 if np.linalg.det(q) > 0 else -1.0
    q_class = MatrixClass.SO if det_q > 0 else MatrixClass.GENERAL_INVERTIBLE
    return _finish(
        a,
        [(q, q_class), (r, MatrixClass.UPPER_TRIANGULAR_POS_DIAG)],
        {"det_q": det_q},
    )


def ldu(a, pivot_tol=DEFAULT_PIVOT_TOL):
    """Unit-lower / diagonal / unit-upper factorization without pivoting.

    Requires every leading principal minor to exceed ``pivot_tol`` in
    magnitude; the failing index is reported otherwise. The diagonal is
    cross-checked against the ratios of independently computed minors.
    """
    a = as_matrix(a)
    lo, d, up, status = _backend.ldu(a, pivot_tol)
    if status != 0:
        raise ZeroPrincipalMinor(status)
    minors = principal_minors(a)
    ratios = minors / np.concatenate(([1.0], minors[:-1]))
    denom = np.maximum(np.abs(d), np.abs(ratios))
    discrepancy = float(np.max(np.abs(d - ratios) / denom))
    if discrepancy > 1e-9:
        raise SelfCheckError(
            f"ldu: diagonal disagrees with principal minor ratios "
            f"(relative error {discrepancy:.3e})"
        )
    return _finish(
        a,
        [
            (lo, MatrixClass.UNIT_LOWER_TRIANGULAR),
            (np.diag(d), MatrixClass.DIAGONAL_NONZERO),
            (up, MatrixClass.UNIT_UPPER_TRIANGULAR),
        ],
        {"minor_ratio_error": discrepancy, "minors": minors},
    )


def polar(a, tol=None):
    """Left polar factorization A = P Q with P symmetric positive definite
    and Q a rotation; requires det(A) > 0."""
    a = as_matrix(a)
    tol = resolve_tol(tol)
    if np.linalg.det(a) <= 0.0:
        raise NonPositiveDeterminant("polar: determinant must be positive")
    n = a.shape[0]
    gram = a @ a.T
    p = spd_sqrt(0.5 * (gram + gram.T), tol)
    q = np.linalg.solve(p, a)
    # the Gram product squares the condition number, so Q can come out of
    # the solve with orthogonality error well above roundoff; Newton-Schulz
    # polishing squares that error down without moving the polar factor
    eye = np.eye(n)
    for _ in range(3):
        err = q.T @ q - eye
        if np.linalg.norm(err) <= 1e-14:
            break
        q = q @ (eye - 0.5 * err)
    ortho_err = np.linalg.norm(q.T @ q - eye)
    if ortho_err > max(tol, 1e-10):
        raise SelfCheckError(
            f"polar: rotation factor lost orthogonality ({ortho_err:.3e}); "
            "input is too ill-conditioned"
        )
    pq = a @ q.T
    p = 0.5 * (pq + pq.T)
    return _finish(a, [(p, MatrixClass.SPD), (q, MatrixClass.SO)])


def spectral_sorted(a, tol=None):
    """Sorted spectral factorization A = Q^T D Q of an SPD matrix.

    D is ascending. Rows of Q are sign-normalized (largest magnitude entry
    positive, ties to the lowest column) and det(Q) is forced to +1 by
    flipping the last row if needed, which makes the factors unique away
    from eigenvalue collisions. Near-collisions warn with
    DegenerateSpectrum instead of failing.
    """
    a = as_matrix(a)
    tol = resolve_tol(tol)
    scale = max(1.0, frobenius_norm(a))
    if np.max(np.abs(a - a.T)) > tol * scale:
        raise NotSPD("spectral_sorted: input not symmetric")
    w, v = _backend.eigh(0.5 * (a + a.T))
    if w[0] <= tol:
        raise NotSPD("spectral_sorted: smallest eigenvalue not positive")
    q = v.T.copy()
    for i in range(q.shape[0]):
        j = int(np.argmax(np.abs(q[i])))
        if q[i, j] < 0:
            q[i] = -q[i]
    if np.linalg.det(q) < 0:
        q[-1] = -q[-1]
    degenerate = False
    if w.size > 1 and float(np.min(np.diff(w))) < DEGENERATE_GAP * frobenius_norm(a):
        degenerate = True
        warnings.warn(
            "spectral_sorted: eigenvalue gap below resolution; sorted "
            "factors are not stable",
            DegenerateSpectrum,
            stacklevel=2,
        )
    d = np.diag(w)
    return _finish(
        a,
        [
            (q.T.copy(), MatrixClass.SO),
            (d, MatrixClass.DIAGONAL),
            (q, MatrixClass.SO),
        ],
        {"degenerate": degenerate},
    )


def cholesky(a, tol=None):
    """Cholesky factorization A = L L^T with a positive diagonal on L."""
    a = as_matrix(a)
    tol = resolve_tol(tol)
    scale = max(1.0, frobenius_norm(a))
    if np.max(np.abs(a - a.T)) > tol * scale:
        raise NotSPD("cholesky: input not symmetric")
    lo, status = _backend.cholesky(0.5 * (a + a.T))
    if status != 0:
        raise NotSPD(f"cholesky: nonpositive pivot at position {status}")
    return _finish(
        a,
        [
            (lo, MatrixClass.LOWER_TRIANGULAR_POS_DIAG),
            (lo.T.copy(), MatrixClass.UPPER_TRIANGULAR_POS_DIAG),
        ],
    )


DECOMPOSITIONS = {
    "qr": qr_pos,
    "ldu": ldu,
    "polar": polar,
    "spectral": spectral_sorted,
    "cholesky": cholesky,
}


def decompose(kind, a, **kwargs):
    """Dispatch to a decomposition by its short name."""
    try:
        fn = DECOMPOSITIONS[kind]
    except KeyError:
        raise ValueError(
            f"unknown decomposition {kind!r}; expected one of "
            f"{sorted(DECOMPOSITIONS)}"
        ) from None
    return fn(a, **kwargs)
