"""Distances, product metrics, and geodesics on the matrix classes.

A Metric is a small descriptor (name, class, parameters) that evaluates to
a nonnegative float. Product metrics combine factor distances through a
combiner psi that must satisfy four fuzz-checked conditions: nonnegative
and zero only at the origin, monotone in each argument, midpoint convex,
and positively homogeneous of degree one.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .core import (
    MatrixClass,
    as_matrix,
    check_class,
    resolve_tol,
    so_exp,
    so_log,
    spd_log,
    spd_sqrt,
)
from .decompositions import decompose
from .errors import ClassViolation, MvfError, NotSPD, NotSymmetric
from . import sampling


def _sym_eig_checked(a, tol, who):
    a = as_matrix(a)
    scale = max(1.0, np.linalg.norm(a))
    if np.max(np.abs(a - a.T)) > tol * scale:
        raise NotSymmetric(f"{who}: input not symmetric")
    return _backend.eigh(0.5 * (a + a.T))


def frobenius_dist(a, b):
    return float(np.linalg.norm(as_matrix(a) - as_matrix(b)))


def riemannian_spd_dist(a, b, tol=None):
    """Affine-invariant distance ||log(A^-1/2 B A^-1/2)||_F on SPD."""
    tol = resolve_tol(tol)
    wa, va = _sym_eig_checked(a, tol, "riemannian_spd")
    if wa[0] <= tol:
        raise NotSPD("riemannian_spd: first argument not positive definite")
    inv_sqrt = (va / np.sqrt(wa)) @ va.T
    _sym_eig_checked(b, tol, "riemannian_spd")  # symmetry gate for b
    m = inv_sqrt @ as_matrix(b) @ inv_sqrt
    w, _ = _backend.eigh(0.5 * (m + m.T))
    if w[0] <= tol:
        raise NotSPD("riemannian_spd: second argument not positive definite")
    return float(np.sqrt(np.sum(np.log(w) ** 2)))


def geodesic_so_dist(a, b, tol=None):
    """Rotation-group distance ||log(A^T B)||_F."""
    return float(np.linalg.norm(so_log(as_matrix(a).T @ as_matrix(b), tol)))


def log_diag_dist(a, b, tol=None):
    """Log-Euclidean distance between positive diagonal matrices."""
    tol = resolve_tol(tol)
    a = as_matrix(a)
    b = as_matrix(b)
    for m in (a, b):
        if not check_class(m, MatrixClass.DIAGONAL, tol):
            raise ClassViolation("log_diag requires diagonal matrices")
        if np.min(np.diag(m)) <= tol:
            raise ClassViolation("log_diag requires positive diagonal entries")
    return float(np.linalg.norm(np.log(np.diag(a)) - np.log(np.diag(b))))


def procrustes_dist(a, b, tol=None):
    """Two-sided orthogonal alignment distance: ||D_A - D_B||_F.

    A pseudo-metric: orthogonally similar matrices are at distance zero.
    """
    tol = resolve_tol(tol)
    wa, _ = _sym_eig_checked(a, tol, "procrustes")
    wb, _ = _sym_eig_checked(b, tol, "procrustes")
    if wa[0] <= tol or wb[0] <= tol:
        raise NotSPD("procrustes: arguments must be positive definite")
    return float(np.linalg.norm(wa - wb))


def hybrid_dist(a, b, beta, tol=None):
    """Riemannian distance plus beta times the spectral alignment distance."""
    if not beta > 0:
        raise ValueError("hybrid metric requires beta > 0")
    return riemannian_spd_dist(a, b, tol) + beta * procrustes_dist(a, b, tol)


def british_railway_dist(a, b):
    """Zero for identical arguments, else the sum of both norms.

    The classic counterexample metric: it never becomes small for nearby
    but distinct matrices, so no continuity is inherited through it.
    """
    a = as_matrix(a)
    b = as_matrix(b)
    if np.array_equal(a, b):
        return 0.0
    return float(np.linalg.norm(a) + np.linalg.norm(b))


# ---------------------------------------------------------------------------
# Combiner functions for product metrics.


@dataclass(eq=False)
class PsiFunction:
    """A combiner (x, y) -> value with its fuzz-check report cached."""

    fn: object
    name: str = "psi"
    _report: object = field(default=None, repr=False)

    def __call__(self, x, y):
        return self.fn(np.asarray(x, dtype=np.float64), np.asarray(y, dtype=np.float64))

    def ensure_valid(self):
        if self._report is None:
            self._report = check_psi(self)
        if not self._report.ok:
            failed = ", ".join(self._report.failed_conditions())
            raise MvfError(f"psi {self.name!r} fails: {failed}")
        return self._report


def p_product(p):
    """The p-norm combiner (x^p + y^p)^(1/p); p = inf gives the max."""
    if p == math.inf:
        return PsiFunction(lambda x, y: np.maximum(x, y), name="p=inf")
    p = float(p)
    if p < 1:
        raise ValueError("p must be >= 1")
    return PsiFunction(
        lambda x, y: (x**p + y**p) ** (1.0 / p),
        name=f"p={p:g}",
    )


@dataclass(frozen=True)
class PsiReport:
    nonneg_definite: bool
    monotone: bool
    jensen_convex: bool
    homogeneous: bool
    counterexamples: dict

    @property
    def ok(self):
        return (
            self.nonneg_definite
            and self.monotone
            and self.jensen_convex
            and self.homogeneous
        )

    def __bool__(self):
        return self.ok

    def failed_conditions(self):
        names = ("nonneg_definite", "monotone", "jensen_convex", "homogeneous")
        return [n for n in names if not getattr(self, n)]


def check_psi(psi, grid_size=24):
    """Fuzz the four combiner conditions on a log-spaced grid.

    The scan covers (0, 1e3]^2 plus the axes, so a combiner that vanishes
    away from the origin (like x*y) is caught by the definiteness probe.
    """
    if grid_size < 4:
        raise ValueError("grid_size too small to be meaningful")
    g = np.logspace(-3, 3, grid_size)
    x, y = np.meshgrid(g, g, indexing="ij")
    z = psi(x, y)
    counterexamples = {}

    nonneg = True
    origin = float(psi(0.0, 0.0))
    if not abs(origin) <= 1e-12:
        nonneg = False
        counterexamples["nonneg_definite"] = (0.0, 0.0, origin)
    if nonneg and np.min(z) < -1e-12:
        i, j = np.unravel_index(int(np.argmin(z)), z.shape)
        nonneg = False
        counterexamples["nonneg_definite"] = (g[i], g[j], float(z[i, j]))
    if nonneg:
        axis_x = psi(g, np.zeros_like(g))
        axis_y = psi(np.zeros_like(g), g)
        for values, pts in ((axis_x, (g, 0.0)), (axis_y, (0.0, g))):
            bad = np.nonzero(values <= 1e-12)[0]
            if bad.size:
                k = int(bad[0])
                xv = pts[0][k] if isinstance(pts[0], np.ndarray) else pts[0]
                yv = pts[1][k] if isinstance(pts[1], np.ndarray) else pts[1]
                nonneg = False
                counterexamples["nonneg_definite"] = (float(xv), float(yv), float(values[k]))
                break

    scale = max(1.0, float(np.max(np.abs(z))))
    monotone = True
    dx = np.diff(z, axis=0)
    dy = np.diff(z, axis=1)
    if np.min(dx) < -1e-9 * scale or np.min(dy) < -1e-9 * scale:
        monotone = False
        if np.min(dx) < -1e-9 * scale:
            i, j = np.unravel_index(int(np.argmin(dx)), dx.shape)
            counterexamples["monotone"] = (g[i], g[j], float(dx[i, j]))
        else:
            i, j = np.unravel_index(int(np.argmin(dy)), dy.shape)
            counterexamples["monotone"] = (g[i], g[j], float(dy[i, j]))

    # midpoint convexity over pairs drawn from a coarser subgrid plus axes
    sub = g[:: max(1, grid_size // 12)]
    pts = [(0.0, 0.0)]
    pts += [(v, 0.0) for v in sub] + [(0.0, v) for v in sub]
    pts += [(xv, yv) for xv in sub for yv in sub]
    pts = np.array(pts)
    vals = psi(pts[:, 0], pts[:, 1])
    mid_x = 0.5 * (pts[:, None, 0] + pts[None, :, 0])
    mid_y = 0.5 * (pts[:, None, 1] + pts[None, :, 1])
    mid_vals = psi(mid_x, mid_y)
    bound = 0.5 * (vals[:, None] + vals[None, :])
    gap = mid_vals - bound
    jensen = True
    if np.max(gap) > 1e-9 * scale:
        i, j = np.unravel_index(int(np.argmax(gap)), gap.shape)
        jensen = False
        counterexamples["jensen_convex"] = (
            tuple(pts[i]),
            tuple(pts[j]),
            float(gap[i, j]),
        )

    homogeneous = True
    for alpha in np.logspace(-2, 2, 9):
        scaled = psi(alpha * x, alpha * y)
        expected = alpha * z
        err = np.abs(scaled - expected)
        lim = 1e-9 * np.maximum(1.0, np.abs(expected))
        if np.any(err > lim):
            i, j = np.unravel_index(int(np.argmax(err - lim)), err.shape)
            homogeneous = False
            counterexamples["homogeneous"] = (g[i], g[j], float(alpha))
            break

    return PsiReport(nonneg, monotone, jensen, homogeneous, counterexamples)


# ---------------------------------------------------------------------------
# Metric descriptors.


@dataclass(frozen=True)
class Metric:
    """Named distance with its class and parameters; callable on pairs."""

    name: str
    matrix_class: MatrixClass
    beta: float = None
    psi: PsiFunction = None
    factor_metrics: tuple = None
    decomposition: str = None
    pseudo: bool = False

    def __call__(self, a, b):
        return metric_eval(self, a, b)


def frobenius_metric(matrix_class=MatrixClass.GENERAL_INVERTIBLE):
    return Metric("frobenius", matrix_class)


def riemannian_spd_metric():
    return Metric("riemannian_spd", MatrixClass.SPD)


def geodesic_so_metric():
    return Metric("geodesic_so", MatrixClass.SO)


def log_diag_metric():
    return Metric("log_diag", MatrixClass.DIAGONAL)


def procrustes_metric():
    return Metric("procrustes", MatrixClass.SPD, pseudo=True)


def hybrid_metric(beta):
    if not beta > 0:
        raise ValueError("hybrid metric requires beta > 0")
    return Metric("hybrid", MatrixClass.SPD, beta=float(beta))


def british_railway_metric(matrix_class=MatrixClass.GENERAL_INVERTIBLE):
    return Metric("british_railway", matrix_class)


def product_psi_metric(
    psi,
    factor_metrics=None,
    decomposition="polar",
    matrix_class=MatrixClass.GENERAL_INVERTIBLE,
):
    """Distance that decomposes both arguments and combines factor distances."""
    if factor_metrics is None:
        factor_metrics = (riemannian_spd_metric(), geodesic_so_metric())
    if len(factor_metrics) != 2:
        raise ValueError("product metric combines exactly two factor distances")
    psi.ensure_valid()
    return Metric(
        "product",
        matrix_class,
        psi=psi,
        factor_metrics=tuple(factor_metrics),
        decomposition=decomposition,
    )


def metric_eval(metric, a, b):
    """Evaluate a metric descriptor on a pair of same-order matrices."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise ValueError("metric arguments must have the same order")
    name = metric.name
    if name == "frobenius":
        return frobenius_dist(a, b)
    if name == "riemannian_spd":
        return riemannian_spd_dist(a, b)
    if name == "geodesic_so":
        return geodesic_so_dist(a, b)
    if name == "log_diag":
        return log_diag_dist(a, b)
    if name == "procrustes":
        return procrustes_dist(a, b)
    if name == "hybrid":
        return hybrid_dist(a, b, metric.beta)
    if name == "british_railway":
        return british_railway_dist(a, b)
    if name == "product":
        return product_metric(
            metric.psi, metric.factor_metrics[0], metric.factor_metrics[1],
            metric.decomposition, a, b,
        )
    raise ValueError(f"unknown metric {name!r}")


def product_metric(psi, d1, d2, decomposition, a, b):
    """psi of the factor distances after decomposing both arguments."""
    psi.ensure_valid()
    fa = decompose(decomposition, as_matrix(a))
    fb = decompose(decomposition, as_matrix(b))
    if len(fa.factors) != 2:
        raise MvfError(
            f"product metric requires a two-factor decomposition, "
            f"{decomposition!r} gives {len(fa.factors)}"
        )
    x1 = metric_eval(d1, fa.matrices[0], fb.matrices[0])
    x2 = metric_eval(d2, fa.matrices[1], fb.matrices[1])
    return float(psi(x1, x2))


# ---------------------------------------------------------------------------
# Geodesics.


@dataclass(frozen=True)
class Geodesic:
    """Constant-speed path with gamma(0) = A and gamma(1) = B."""

    a: np.ndarray
    b: np.ndarray
    matrix_class: MatrixClass
    _evaluator: object

    def __call__(self, s):
        s = float(s)
        if s < -1e-12 or s > 1.0 + 1e-12:
            raise ValueError(f"geodesic parameter {s} outside [0, 1]")
        return self._evaluator(min(max(s, 0.0), 1.0))


def _spd_geodesic(a, b, tol):
    wa, va = _sym_eig_checked(a, tol, "geodesic")
    if wa[0] <= tol:
        raise NotSPD("geodesic: endpoint not positive definite")
    sqrt_a = (va * np.sqrt(wa)) @ va.T
    inv_sqrt_a = (va / np.sqrt(wa)) @ va.T
    _sym_eig_checked(b, tol, "geodesic")
    m = inv_sqrt_a @ b @ inv_sqrt_a
    w, v = _backend.eigh(0.5 * (m + m.T))
    if w[0] <= tol:
        raise NotSPD("geodesic: endpoint not positive definite")
    log_w = np.log(w)

    def ev(s):
        mid = (v * np.exp(s * log_w)) @ v.T
        out = sqrt_a @ mid @ sqrt_a
        return 0.5 * (out + out.T)

    return ev


def _so_geodesic(a, b, tol):
    x = so_log(a.T @ b, tol)
    m = -(x @ x)
    theta2, v = _backend.eigh(0.5 * (m + m.T))
    theta = np.sqrt(np.clip(theta2, 0.0, None))

    def ev(s):
        st = s * theta
        cos_m = (v * np.cos(st)) @ v.T
        sinc_m = (v * np.sinc(st / np.pi)) @ v.T
        return a @ (cos_m + (s * x) @ sinc_m)

    return ev


def _diag_geodesic(a, b, tol):
    da = np.diag(a)
    db = np.diag(b)
    if np.min(da) <= tol or np.min(db) <= tol:
        raise ClassViolation("geodesic on diagonal matrices requires positive entries")
    la = np.log(da)
    lb = np.log(db)

    def ev(s):
        return np.diag(np.exp((1.0 - s) * la + s * lb))

    return ev


def geodesic(a, b, matrix_class, tol=None):
    """Class geodesic from A to B; defined for SPD, SO, positive diagonal,
    and positive scalar classes."""
    tol = resolve_tol(tol)
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise ValueError("geodesic endpoints must have the same order")
    if matrix_class is MatrixClass.SPD:
        ev = _spd_geodesic(a, b, tol)
    elif matrix_class is MatrixClass.SO:
        ev = _so_geodesic(a, b, tol)
    elif matrix_class in (MatrixClass.DIAGONAL, MatrixClass.DIAGONAL_NONZERO):
        ev = _diag_geodesic(a, b, tol)
    elif matrix_class is MatrixClass.POSITIVE_SCALAR_1X1:
        ev = _diag_geodesic(a, b, tol)
    else:
        raise MvfError(f"no geodesic available for class {matrix_class.value}")
    return Geodesic(a, b, matrix_class, ev)


def product_geodesic(a, b, decomposition="polar", tol=None):
    """Factor-wise geodesic: decompose both endpoints, connect each factor,
    multiply pointwise."""
    tol = resolve_tol(tol)
    a = as_matrix(a)
    b = as_matrix(b)
    if decomposition != "polar":
        raise MvfError(
            f"product geodesic supports the polar decomposition, "
            f"not {decomposition!r}"
        )
    fa = decompose(decomposition, a)
    fb = decompose(decomposition, b)
    g1 = geodesic(fa.matrices[0], fb.matrices[0], MatrixClass.SPD, tol)
    g2 = geodesic(fa.matrices[1], fb.matrices[1], MatrixClass.SO, tol)

    def ev(s):
        return g1(s) @ g2(s)

    return Geodesic(a, b, MatrixClass.GENERAL_INVERTIBLE, ev)


# ---------------------------------------------------------------------------
# Majorization probe.


@dataclass(frozen=True)
class MajorizationReport:
    constant: float
    unbounded: bool
    pairs_used: int

    def __repr__(self):
        if self.unbounded:
            return f"MajorizationReport(unbounded, pairs_used={self.pairs_used})"
        return (
            f"MajorizationReport(constant={self.constant:.6g}, "
            f"pairs_used={self.pairs_used})"
        )


_UNBOUNDED_RATIO = 1e6


def _near_pair(matrix_class, a, eps, rng):
    n = a.shape[0]
    if matrix_class is MatrixClass.SPD:
        bump = rng.standard_normal((n, n))
        bump = 0.5 * (bump + bump.T)
        from .core import spd_exp

        return spd_exp(spd_log(a) + eps * bump)
    if matrix_class is MatrixClass.SO:
        bump = rng.standard_normal((n, n))
        bump = 0.5 * (bump - bump.T)
        return a @ so_exp(eps * bump)
    bump = rng.standard_normal((n, n))
    return a + eps * bump


def majorization_probe(d_target, d_ref, sample_count=100, n=3, rng=None):
    """Estimate sup d_target / d_ref over random and near-coincident pairs.

    Reports unbounded when the ratio exceeds 1e6 anywhere on a schedule of
    pairs approaching coincidence; no bound is asserted, only estimated.
    """
    if sample_count < 1:
        raise ValueError("sample_count must be positive")
    if d_target.matrix_class is not d_ref.matrix_class:
        raise ValueError("both metrics must live on the same class")
    rng = sampling.rng_from_seed() if rng is None else rng
    cls = d_target.matrix_class
    worst = 0.0
    used = 0

    def consider(a, b):
        nonlocal worst, used
        ref = metric_eval(d_ref, a, b)
        tgt = metric_eval(d_target, a, b)
        if ref <= 1e-15:
            if tgt > 1e-12:
                worst = math.inf
            return
        used += 1
        worst = max(worst, tgt / ref)

    for _ in range(sample_count):
        a = sampling.random_for_class(cls, n, rng)
        b = sampling.random_for_class(cls, n, rng)
        consider(a, b)
        if worst > _UNBOUNDED_RATIO:
            return MajorizationReport(math.inf, True, used)

    base = sampling.random_for_class(cls, n, rng)
    for k in range(1, 31):
        near = _near_pair(cls, base, 2.0**-k, rng)
        if not check_class(near, cls):
            continue
        consider(base, near)
        if worst > _UNBOUNDED_RATIO:
            return MajorizationReport(math.inf, True, used)

    return MajorizationReport(float(worst), False, used)
