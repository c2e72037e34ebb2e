"""Empirical order, regularity, and structure-preservation diagnostics.

approximation_order runs an operator against a known truth curve over a
sequence of halved meshes and fits the error decay; holder_exponent
measures the modulus of continuity of any curve; the check_* routines
verify that determinants and positive scaling commute with approximation.
"""

import math
from dataclasses import dataclass

import numpy as np

from .core import MatrixClass, ParamSamples, frobenius_norm, resolve_tol
from .errors import MvfError
from .operators import OperatorSpec

EXACT_TOL = 1e-10

# fit only levels whose error is safely above the floating point floor
_FLOOR = 1e-14

# a consecutive halving ratio this far (relative) from the finest one marks
# the coarse levels as pre-asymptotic
_RATIO_SLACK = 0.25


@dataclass(frozen=True)
class OrderReport:
    hs: tuple
    errors: tuple
    slope: object
    constant: object
    exact: bool
    levels_used: int

    def __repr__(self):
        if self.exact:
            return f"OrderReport(exact, errors<= {max(self.errors):.3e})"
        return (
            f"OrderReport(slope={self.slope:.3f}, constant={self.constant:.3e}, "
            f"levels_used={self.levels_used})"
        )


def _sup_error(curve, truth, ts):
    worst = 0.0
    scale = 1.0
    for t in ts:
        want = truth(t)
        worst = max(worst, frobenius_norm(curve(t) - want))
        scale = max(scale, frobenius_norm(want))
    return worst, scale


def approximation_order(
    truth,
    builder,
    domain,
    matrix_class,
    levels=5,
    base_intervals=4,
    points_per_interval=16,
    exact_tol=EXACT_TOL,
    tol=None,
):
    """Fit the empirical convergence order of ``builder`` against ``truth``.

    The truth is sampled on uniform meshes that halve ``levels`` times
    starting from ``base_intervals`` intervals; the sup error is measured
    on a grid with ``points_per_interval`` points per finest interval. A
    least squares fit of log error against log mesh width gives the slope.
    Coarse levels are dropped from the fit when their halving ratios are
    still far from the asymptotic one.
    """
    if levels < 4:
        raise ValueError("order studies need at least 4 halving levels")
    tol = resolve_tol(tol)
    t0, t1 = float(domain[0]), float(domain[1])
    hs = []
    errors = []
    scale = 1.0
    for level in range(levels):
        intervals = base_intervals * (2**level)
        ts = np.linspace(t0, t1, intervals + 1)
        samples = ParamSamples(
            ts, np.stack([truth(t) for t in ts]), matrix_class, tol
        )
        curve = builder.build(samples, tol)
        dense = np.linspace(t0, t1, intervals * points_per_interval + 1)
        err, level_scale = _sup_error(curve, truth, dense)
        hs.append((t1 - t0) / intervals)
        errors.append(err)
        scale = max(scale, level_scale)
    hs = np.array(hs)
    errors = np.array(errors)
    if np.all(errors <= exact_tol * scale):
        return OrderReport(
            tuple(hs), tuple(errors), None, None, True, 0
        )
    mask = errors > _FLOOR * scale
    if int(mask.sum()) < 2:
        return OrderReport(tuple(hs), tuple(errors), None, None, True, 0)
    fit_h = hs[mask]
    fit_e = errors[mask]
    ratios = np.log2(fit_e[:-1] / fit_e[1:])
    finest = ratios[-1]
    settled = np.abs(ratios - finest) <= _RATIO_SLACK * abs(finest)
    if not np.all(settled) and fit_h.size > 3:
        fit_h = fit_h[-3:]
        fit_e = fit_e[-3:]
    slope, intercept = np.polyfit(np.log(fit_h), np.log(fit_e), 1)
    return OrderReport(
        tuple(hs),
        tuple(errors),
        float(slope),
        float(math.exp(intercept)),
        False,
        int(fit_h.size),
    )


@dataclass(frozen=True)
class HolderReport:
    deltas: tuple
    sups: tuple
    exponent: object
    constant: object
    exact: bool

    def __repr__(self):
        if self.exact:
            return "HolderReport(constant curve)"
        return f"HolderReport(exponent={self.exponent:.3f})"


def _holder_probes(t0, span):
    """Deterministic probe abscissae, clustered near the domain start where
    fractional regularity concentrates, plus uniform coverage."""
    pts = [t0]
    pts.extend(t0 + span * 2.0 ** (-k) for k in range(1, 13))
    pts.extend(t0 + span * i / 32.0 for i in range(32))
    return np.unique(np.array(pts))


def holder_exponent(fn, domain=None, j_min=5, j_max=15):
    """Estimate the Holder exponent of ``fn`` on its domain.

    The sup of the increment norm over a fixed probe set is measured for
    step sizes span * 2^-j, j in [j_min, j_max], and the exponent is the
    log-log slope. The estimate is clipped to 1.05: uniform increments
    cannot distinguish regularity beyond Lipschitz.
    """
    if domain is None:
        domain = fn.domain
    t0, t1 = float(domain[0]), float(domain[1])
    span = t1 - t0
    if span <= 0:
        raise ValueError("domain must have positive length")
    probes = _holder_probes(t0, span)
    deltas = []
    sups = []
    scale = 1.0
    for j in range(j_min, j_max + 1):
        delta = span * 2.0 ** (-j)
        worst = 0.0
        for t in probes:
            if t + delta > t1 + 1e-15 * span:
                continue
            a = fn(t)
            b = fn(t + delta)
            worst = max(worst, frobenius_norm(b - a))
            scale = max(scale, frobenius_norm(a))
        deltas.append(delta)
        sups.append(worst)
    deltas = np.array(deltas)
    sups = np.array(sups)
    if np.all(sups <= 1e-13 * scale):
        return HolderReport(tuple(deltas), tuple(sups), None, None, True)
    slope, intercept = np.polyfit(np.log(deltas), np.log(sups), 1)
    exponent = min(float(slope), 1.05)
    return HolderReport(
        tuple(deltas),
        tuple(sups),
        exponent,
        float(math.exp(intercept)),
        False,
    )


@dataclass(frozen=True)
class DetCommutativityReport:
    ok: bool
    max_rel_error: float
    grid_size: int


def check_det_commutativity(
    builder, samples, scalar_spec=None, grid_size=1001, rel_tol=1e-8, tol=None
):
    """Determinant of the approximant versus the scalar approximant of the
    determinants, on a dense grid.

    The sample determinants must share one sign; their magnitudes are fed
    to the scalar counterpart operator and the common sign is restored.
    """
    tol = resolve_tol(tol)
    curve = builder.build(samples, tol)
    dets = np.array(
        [np.linalg.det(samples.matrices[i]) for i in range(samples.count)]
    )
    signs = np.sign(dets)
    if np.any(signs == 0) or not np.all(signs == signs[0]):
        raise MvfError(
            "determinant commutation needs one nonzero determinant sign "
            "across all samples"
        )
    sigma = float(signs[0])
    if scalar_spec is None:
        counterpart = getattr(builder, "scalar_counterpart", None)
        scalar_spec = (
            counterpart() if counterpart else OperatorSpec("positive_scalar")
        )
    scalar_curve = scalar_spec.build(
        ParamSamples.from_scalars(samples.t, np.abs(dets)), tol
    )
    ts = np.linspace(samples.t[0], samples.t[-1], grid_size)
    worst = 0.0
    for t in ts:
        want = sigma * scalar_curve(t)[0, 0]
        got = float(np.linalg.det(curve(t)))
        worst = max(worst, abs(got - want) / max(abs(want), 1e-300))
    return DetCommutativityReport(bool(worst <= rel_tol), float(worst), grid_size)


@dataclass(frozen=True)
class HomogeneityReport:
    ok: bool
    max_rel_error: float
    alphas: tuple


def check_homogeneity(
    builder, samples, alphas=(0.5, 2.0, 3.7), grid_size=101, rel_tol=1e-8, tol=None
):
    """Positive scaling commutes with approximation: building from alpha * A_i
    must equal alpha times the curve built from A_i.

    Scaling a sample set out of its class (for example any alpha != 1 on
    rotations) raises ClassViolation during sample construction; that is
    the correct outcome, not a check failure.
    """
    tol = resolve_tol(tol)
    base = builder.build(samples, tol)
    ts = np.linspace(samples.t[0], samples.t[-1], grid_size)
    worst = 0.0
    for alpha in alphas:
        alpha = float(alpha)
        scaled_samples = ParamSamples(
            samples.t, alpha * samples.matrices, samples.matrix_class, tol
        )
        scaled = builder.build(scaled_samples, tol)
        for t in ts:
            want = alpha * base(t)
            got = scaled(t)
            rel = frobenius_norm(got - want) / max(frobenius_norm(want), 1e-300)
            worst = max(worst, rel)
    return HomogeneityReport(worst <= rel_tol, float(worst), tuple(alphas))


# fixed symmetric generators for the curved truths; S0 and S1 do not
# commute, so exp(t*S0 + t^2*S1) is not a one-parameter subgroup
_S0 = np.array([[0.8, 0.3], [0.3, 0.2]])
_S1 = np.array([[0.0, 0.3], [0.3, 0.0]])


def _rot(angle):
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s], [s, c]])


def _sym_expm(x):
    w, v = np.linalg.eigh(x)
    out = (v * np.exp(w)) @ v.T
    return 0.5 * (out + out.T)


@dataclass(frozen=True)
class TruthCurve:
    """A reference curve with a known closed form."""

    name: str
    fn: object
    domain: tuple
    matrix_class: MatrixClass
    notes: str

    def __call__(self, t):
        return self.fn(float(t))

    def samples(self, intervals, tol=None):
        ts = np.linspace(self.domain[0], self.domain[1], intervals + 1)
        return ParamSamples(
            ts, np.stack([self.fn(float(t)) for t in ts]), self.matrix_class, tol
        )


def _polar_truth(t):
    return _sym_expm(t * _S0 + t * t * _S1) @ _rot(t)


TRUTHS = {
    "spd_exp_curve": TruthCurve(
        "spd_exp_curve",
        lambda t: _sym_expm(t * _S0),
        (0.0, 1.0),
        MatrixClass.SPD,
        "one-parameter SPD subgroup; geodesic and log-linear operators "
        "reproduce it exactly",
    ),
    "rot_curve": TruthCurve(
        "rot_curve",
        lambda t: _rot(t),
        (0.0, 1.5),
        MatrixClass.SO,
        "constant-speed rotation; a rotation geodesic, so interpolation "
        "is exact",
    ),
    "spd_curved": TruthCurve(
        "spd_curved",
        lambda t: _sym_expm(t * _S0 + t * t * _S1),
        (0.0, 1.0),
        MatrixClass.SPD,
        "log-nonlinear SPD curve for measuring second order decay",
    ),
    "polar_curve": TruthCurve(
        "polar_curve",
        _polar_truth,
        (0.0, 1.0),
        MatrixClass.GENERAL_INVERTIBLE,
        "curved SPD factor times a rotation; exercises the polar product "
        "operator away from exactness",
    ),
    "sqrt_rot": TruthCurve(
        "sqrt_rot",
        lambda t: _rot(math.sqrt(max(t, 0.0))),
        (0.0, 1.0),
        MatrixClass.SO,
        "Holder 1/2 at the left endpoint; regularity benchmark",
    ),
}
