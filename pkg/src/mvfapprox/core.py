"""Matrix validation, class predicates, matrix functions, and samples.

A "matrix" throughout the package is a square, finite, float64 numpy array.
Class membership is always checked against an explicit tolerance; the
``MVF_TOL`` environment variable overrides the default of 1e-10.
"""

import os
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import _backend
from .errors import (
    ClassViolation,
    LogBranchFailure,
    NotSPD,
    NotSymmetric,
    NotSkewSymmetric,
)

DEFAULT_TOL = 1e-10


def default_tol():
    """Active class tolerance. MVF_TOL in the environment overrides it."""
    value = os.environ.get("MVF_TOL", "").strip()
    return float(value) if value else DEFAULT_TOL


def resolve_tol(tol):
    return default_tol() if tol is None else float(tol)


class MatrixClass(Enum):
    GENERAL_INVERTIBLE = "general_invertible"
    SPD = "spd"
    SO = "so"
    UNIT_LOWER_TRIANGULAR = "unit_lower_triangular"
    UNIT_UPPER_TRIANGULAR = "unit_upper_triangular"
    UPPER_TRIANGULAR_POS_DIAG = "upper_triangular_pos_diag"
    LOWER_TRIANGULAR_POS_DIAG = "lower_triangular_pos_diag"
    DIAGONAL = "diagonal"
    DIAGONAL_NONZERO = "diagonal_nonzero"
    POSITIVE_SCALAR_1X1 = "positive_scalar_1x1"

    @classmethod
    def from_name(cls, name):
        for member in cls:
            if member.value == name:
                return member
        raise ValueError(f"unknown matrix class {name!r}")


def as_matrix(a):
    """Validate and return a square float64 matrix (n >= 1, finite entries)."""
    arr = np.asarray(a, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
        raise ValueError(f"expected a square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix entries must be finite")
    return arr


def frobenius_norm(a):
    return float(np.linalg.norm(as_matrix(a)))


def principal_minors(a):
    """Leading principal minors det(A[:k, :k]) for k = 1..n."""
    a = as_matrix(a)
    n = a.shape[0]
    return np.array([np.linalg.det(a[:k, :k]) for k in range(1, n + 1)])


@dataclass(frozen=True)
class ClassCheck:
    """Outcome of a class predicate; reason names the first failed condition."""

    ok: bool
    reason: str = ""

    def __bool__(self):
        return self.ok


def _fail(reason):
    return ClassCheck(False, reason)


_OK = ClassCheck(True)


def check_class(a, matrix_class, tol=None):
    """Check membership of a matrix in a class within a tolerance.

    Positivity conditions (SPD eigenvalues, positive diagonals, invertibility
    margins) are strict: anything within ``tol`` of the class boundary is
    rejected rather than regularized.
    """
    a = as_matrix(a)
    tol = resolve_tol(tol)
    n = a.shape[0]
    cls = matrix_class

    if cls is MatrixClass.GENERAL_INVERTIBLE:
        scale = np.linalg.norm(a)
        if scale == 0.0:
            return _fail("singular within tolerance")
        _, r = _backend.qr(a)
        if np.min(np.abs(np.diag(r))) <= tol * scale:
            return _fail("singular within tolerance")
        return _OK

    if cls is MatrixClass.SPD:
        scale = max(1.0, np.linalg.norm(a))
        if np.max(np.abs(a - a.T)) > tol * scale:
            return _fail("not symmetric")
        w, _ = _backend.eigh(0.5 * (a + a.T))
        if w[0] <= tol:
            return _fail("smallest eigenvalue not positive")
        return _OK

    if cls is MatrixClass.SO:
        if np.linalg.norm(a.T @ a - np.eye(n)) > tol:
            return _fail("not orthogonal")
        if abs(np.linalg.det(a) - 1.0) > tol:
            return _fail("determinant not one")
        return _OK

    if cls in (MatrixClass.UNIT_LOWER_TRIANGULAR, MatrixClass.UNIT_UPPER_TRIANGULAR):
        off = np.triu(a, 1) if cls is MatrixClass.UNIT_LOWER_TRIANGULAR else np.tril(a, -1)
        side = "upper" if cls is MatrixClass.UNIT_LOWER_TRIANGULAR else "lower"
        if np.max(np.abs(off)) > tol:
            return _fail(f"{side} triangle not zero")
        if np.max(np.abs(np.diag(a) - 1.0)) > tol:
            return _fail("diagonal not unit")
        return _OK

    if cls in (
        MatrixClass.UPPER_TRIANGULAR_POS_DIAG,
        MatrixClass.LOWER_TRIANGULAR_POS_DIAG,
    ):
        off = (
            np.tril(a, -1)
            if cls is MatrixClass.UPPER_TRIANGULAR_POS_DIAG
            else np.triu(a, 1)
        )
        side = "lower" if cls is MatrixClass.UPPER_TRIANGULAR_POS_DIAG else "upper"
        if np.max(np.abs(off)) > tol:
            return _fail(f"{side} triangle not zero")
        if np.min(np.diag(a)) <= tol:
            return _fail("diagonal not positive")
        return _OK

    if cls is MatrixClass.DIAGONAL:
        if n > 1 and np.max(np.abs(a - np.diag(np.diag(a)))) > tol:
            return _fail("off-diagonal not zero")
        return _OK

    if cls is MatrixClass.DIAGONAL_NONZERO:
        if n > 1 and np.max(np.abs(a - np.diag(np.diag(a)))) > tol:
            return _fail("off-diagonal not zero")
        if np.min(np.abs(np.diag(a))) <= tol:
            return _fail("diagonal entry too close to zero")
        return _OK

    if cls is MatrixClass.POSITIVE_SCALAR_1X1:
        if n != 1:
            return _fail("not 1x1")
        if a[0, 0] <= tol:
            return _fail("entry not positive")
        return _OK

    raise ValueError(f"unknown matrix class {matrix_class!r}")


def require_class(a, matrix_class, tol=None, context=""):
    """Raise ClassViolation unless the matrix passes its class check."""
    result = check_class(a, matrix_class, tol)
    if not result:
        where = f"{context}: " if context else ""
        raise ClassViolation(
            f"{where}matrix fails {matrix_class.value} check ({result.reason})"
        )
    return a


# ---------------------------------------------------------------------------
# Matrix functions on the symmetric / rotation / unipotent classes.
# All of them ride on the symmetric eigendecomposition backend.


def _checked_symmetric(a, tol, who):
    a = as_matrix(a)
    scale = max(1.0, np.linalg.norm(a))
    if np.max(np.abs(a - a.T)) > tol * scale:
        raise NotSymmetric(f"{who} requires a symmetric matrix")
    return 0.5 * (a + a.T)


def _spd_eigh(a, tol, who):
    sym = _checked_symmetric(a, tol, who)
    w, v = _backend.eigh(sym)
    if w[0] <= tol:
        raise NotSPD(f"{who}: smallest eigenvalue {w[0]:.3e} not positive")
    return w, v


def _sym_apply(w, v, f):
    b = (v * f(w)) @ v.T
    return 0.5 * (b + b.T)


def spd_sqrt(a, tol=None):
    """Unique SPD square root."""
    tol = resolve_tol(tol)
    w, v = _spd_eigh(a, tol, "spd_sqrt")
    return _sym_apply(w, v, np.sqrt)


def spd_log(a, tol=None):
    """Symmetric logarithm of an SPD matrix."""
    tol = resolve_tol(tol)
    w, v = _spd_eigh(a, tol, "spd_log")
    return _sym_apply(w, v, np.log)


def spd_exp(a, tol=None):
    """Exponential of a symmetric matrix; the result is SPD."""
    tol = resolve_tol(tol)
    sym = _checked_symmetric(a, tol, "spd_exp")
    w, v = _backend.eigh(sym)
    return _sym_apply(w, v, np.exp)


def spd_power(a, exponent, tol=None):
    """Real power of an SPD matrix, exact on commuting inputs."""
    tol = resolve_tol(tol)
    w, v = _spd_eigh(a, tol, "spd_power")
    return _sym_apply(w, v, lambda x: np.power(x, exponent))


def _skew_checked(x, tol, who):
    x = as_matrix(x)
    scale = max(1.0, np.linalg.norm(x))
    if np.max(np.abs(x + x.T)) > tol * scale:
        raise NotSkewSymmetric(f"{who} requires a skew-symmetric matrix")
    return 0.5 * (x - x.T)


def so_exp(x, tol=None):
    """Exponential of a skew-symmetric matrix onto the rotation group.

    Computed as cos(sqrt(M)) + X sinc(sqrt(M)) with M = -X^2, which reduces
    to symmetric eigendecompositions and is exactly orthogonal in exact
    arithmetic for any skew input.
    """
    tol = resolve_tol(tol)
    x = _skew_checked(x, tol, "so_exp")
    m = -(x @ x)
    w, v = _backend.eigh(0.5 * (m + m.T))
    theta = np.sqrt(np.clip(w, 0.0, None))
    cos_m = _sym_apply(theta, v, np.cos)
    sinc_m = _sym_apply(theta, v, lambda t: np.sinc(t / np.pi))
    return cos_m + x @ sinc_m


def _log_scale(lam):
    # theta / sin(theta) evaluated stably at theta = arccos(lam), lam in (-1, 1]
    lam = np.clip(lam, -1.0, 1.0)
    theta = np.arccos(lam)
    sin_t = np.sqrt(np.clip(1.0 - lam * lam, 0.0, None))
    out = np.empty_like(theta)
    small = sin_t < 1e-6
    out[small] = 1.0 + theta[small] ** 2 / 6.0 + 7.0 * theta[small] ** 4 / 360.0
    out[~small] = theta[~small] / sin_t[~small]
    return out


def so_log(q, tol=None):
    """Principal logarithm of a rotation matrix; the result is skew.

    Raises LogBranchFailure when the rotation has an eigenvalue at -1 (a
    half turn), where no principal branch exists. The computation applies a
    scalar function of the symmetric part to the skew part, which equals the
    skew part of the principal logarithm for any special orthogonal input.
    """
    tol = resolve_tol(tol)
    q = as_matrix(q)
    result = check_class(q, MatrixClass.SO, tol)
    if not result:
        raise ClassViolation(f"so_log requires a rotation matrix ({result.reason})")
    sym = 0.5 * (q + q.T)
    skew = 0.5 * (q - q.T)
    w, v = _backend.eigh(sym)
    if w[0] <= -1.0 + tol:
        raise LogBranchFailure(
            "rotation has an eigenvalue at -1; no principal logarithm. "
            "Densify or re-parameterize the samples."
        )
    scale = _sym_apply(w, v, _log_scale)
    x = scale @ skew
    return 0.5 * (x - x.T)


def _strict_triangular_parts(a):
    lower = np.tril(a, -1)
    upper = np.triu(a, 1)
    return lower, upper


def unit_triangular_log(a, tol=None):
    """Logarithm of a unit triangular matrix: an exact finite polynomial.

    The nilpotent part N = A - I satisfies N^n = 0, so the series terminates
    and the output carries the same strict triangle exactly.
    """
    tol = resolve_tol(tol)
    a = as_matrix(a)
    n = a.shape[0]
    lower_ok = check_class(a, MatrixClass.UNIT_LOWER_TRIANGULAR, tol)
    upper_ok = check_class(a, MatrixClass.UNIT_UPPER_TRIANGULAR, tol)
    if not (lower_ok or upper_ok):
        raise ClassViolation(
            f"unit_triangular_log requires a unit triangular matrix "
            f"({lower_ok.reason})"
        )
    nil = a - np.eye(n)
    nil = np.tril(nil, -1) if lower_ok else np.triu(nil, 1)
    out = np.zeros_like(a)
    power = nil.copy()
    for k in range(1, n):
        out += ((-1.0) ** (k + 1) / k) * power
        power = power @ nil
    return out


def unit_triangular_exp(x, tol=None):
    """Exponential of a strictly triangular (nilpotent) matrix.

    Exact finite polynomial; the unit diagonal of the result is exact.
    """
    tol = resolve_tol(tol)
    x = as_matrix(x)
    n = x.shape[0]
    lower, upper = _strict_triangular_parts(x)
    scale = max(1.0, np.linalg.norm(x))
    if np.max(np.abs(np.diag(x))) > tol * scale:
        raise ClassViolation("unit_triangular_exp requires zero diagonal")
    if np.linalg.norm(upper) <= tol * scale:
        nil = lower
    elif np.linalg.norm(lower) <= tol * scale:
        nil = upper
    else:
        raise ClassViolation("unit_triangular_exp requires a strict triangle")
    out = np.eye(n)
    power = nil.copy()
    fact = 1.0
    for k in range(1, n):
        fact *= k
        out += power / fact
        power = power @ nil
    return out


# ---------------------------------------------------------------------------


class ParamSamples:
    """Strictly increasing abscissae with one matrix sample per abscissa.

    All samples must pass the check for the declared class. Instances are
    immutable; the arrays are copied in and marked read-only.
    """

    def __init__(self, t, matrices, matrix_class, tol=None):
        t = np.asarray(t, dtype=np.float64)
        if t.ndim != 1 or t.size < 1:
            raise ValueError("t must be a 1-d array with at least one entry")
        if not np.all(np.isfinite(t)):
            raise ValueError("abscissae must be finite")
        if t.size > 1 and not np.all(np.diff(t) > 0):
            raise ValueError("abscissae must be strictly increasing")
        mats = np.asarray(matrices, dtype=np.float64)
        if mats.ndim != 3 or mats.shape[0] != t.size or mats.shape[1] != mats.shape[2]:
            raise ValueError(
                f"matrices must have shape (len(t), n, n), got {mats.shape}"
            )
        if not np.all(np.isfinite(mats)):
            raise ValueError("matrix entries must be finite")
        tol = resolve_tol(tol)
        for i in range(mats.shape[0]):
            result = check_class(mats[i], matrix_class, tol)
            if not result:
                raise ClassViolation(
                    f"sample {i} fails {matrix_class.value} check ({result.reason})"
                )
        self._t = t.copy()
        self._matrices = mats.copy()
        self._t.setflags(write=False)
        self._matrices.setflags(write=False)
        self.matrix_class = matrix_class
        self.tol = tol

    @classmethod
    def from_scalars(cls, t, values, matrix_class=MatrixClass.POSITIVE_SCALAR_1X1, tol=None):
        values = np.asarray(values, dtype=np.float64)
        return cls(t, values.reshape(-1, 1, 1), matrix_class, tol)

    @property
    def t(self):
        return self._t

    @property
    def matrices(self):
        return self._matrices

    @property
    def n(self):
        return self._matrices.shape[1]

    @property
    def count(self):
        return self._t.size

    @property
    def h(self):
        """Largest spacing between consecutive abscissae."""
        if self._t.size < 2:
            return 0.0
        return float(np.max(np.diff(self._t)))

    @property
    def domain(self):
        return float(self._t[0]), float(self._t[-1])

    def __len__(self):
        return self._t.size

    def __repr__(self):
        lo, hi = self.domain
        return (
            f"ParamSamples({self.count} samples of {self.n}x{self.n} "
            f"{self.matrix_class.value} on [{lo:g}, {hi:g}])"
        )
