"""Base approximation operators: samples in, parameterized curve out.

Every operator consumes a ParamSamples and returns a Curve defined on
[t_0, t_N] with no extrapolation. Evaluations stay inside the declared
matrix class; positivity and sign structure are preserved by construction,
never by projection.
"""

from dataclasses import dataclass, field

import numpy as np

from .core import (
    MatrixClass,
    ParamSamples,
    resolve_tol,
    so_exp,
    so_log,
    spd_exp,
    spd_log,
    unit_triangular_exp,
    unit_triangular_log,
)
from .errors import (
    ClassViolation,
    DegreeMismatch,
    LogBranchFailure,
    MvfError,
    NonPositiveSample,
    SignPatternViolation,
    ZeroDiagonal,
)
from .metrics import geodesic

_GEODESIC_CLASSES = (
    MatrixClass.SPD,
    MatrixClass.SO,
    MatrixClass.DIAGONAL,
    MatrixClass.POSITIVE_SCALAR_1X1,
)

_LOG_EXP_CLASSES = _GEODESIC_CLASSES + (
    MatrixClass.UNIT_LOWER_TRIANGULAR,
    MatrixClass.UNIT_UPPER_TRIANGULAR,
)


@dataclass(frozen=True)
class Curve:
    """Matrix-valued function on [t_min, t_max]; callable, no extrapolation."""

    t_min: float
    t_max: float
    n: int
    matrix_class: MatrixClass
    interpolatory: bool
    consistent: bool
    claimed_order: object
    _evaluator: object
    meta: dict = field(default_factory=dict)

    @property
    def domain(self):
        return self.t_min, self.t_max

    def __call__(self, t):
        t = float(t)
        slack = 1e-12 * max(1.0, abs(self.t_min), abs(self.t_max))
        if t < self.t_min - slack or t > self.t_max + slack:
            raise ValueError(
                f"t={t} outside the curve domain [{self.t_min}, {self.t_max}]; "
                "no extrapolation"
            )
        return self._evaluator(min(max(t, self.t_min), self.t_max))

    def grid(self, ts):
        """Evaluate on many parameters, stacked along the first axis."""
        return np.stack([self(t) for t in np.asarray(ts, dtype=np.float64)])


def _interval_index(ts, t):
    i = int(np.searchsorted(ts, t, side="right")) - 1
    return min(max(i, 0), ts.size - 2)


def _require_count(samples, least, who):
    if samples.count < least:
        raise ValueError(f"{who} needs at least {least} samples")


def geodesic_piecewise(samples, tol=None):
    """Piecewise class geodesic through every sample. Order two.

    Geodesics are built lazily per interval and cached, so very fine sample
    sets only pay for the intervals actually evaluated.
    """
    tol = resolve_tol(tol)
    _require_count(samples, 2, "geodesic_piecewise")
    if samples.matrix_class not in _GEODESIC_CLASSES:
        raise MvfError(
            f"geodesic_piecewise does not support class "
            f"{samples.matrix_class.value}"
        )
    ts = samples.t
    mats = samples.matrices
    cache = {}

    def segment(i):
        g = cache.get(i)
        if g is None:
            try:
                g = geodesic(mats[i], mats[i + 1], samples.matrix_class, tol)
            except LogBranchFailure as exc:
                raise LogBranchFailure(
                    f"{exc} (interval {i})", interval=i
                ) from None
            cache[i] = g
        return g

    def ev(t):
        i = _interval_index(ts, t)
        s = (t - ts[i]) / (ts[i + 1] - ts[i])
        return segment(i)(s)

    return Curve(
        float(ts[0]),
        float(ts[-1]),
        samples.n,
        samples.matrix_class,
        interpolatory=True,
        consistent=True,
        claimed_order=2,
        _evaluator=ev,
    )


def bernstein_de_casteljau(samples, degree=None, tol=None):
    """Degree-N curve from N+1 control samples via repeated geodesic
    averaging. Interpolates the endpoints only; consistent.

    ``degree`` must match len(samples) - 1 when given.
    """
    tol = resolve_tol(tol)
    _require_count(samples, 2, "bernstein_de_casteljau")
    if samples.matrix_class not in _GEODESIC_CLASSES:
        raise MvfError(
            f"bernstein_de_casteljau does not support class "
            f"{samples.matrix_class.value}"
        )
    n_deg = samples.count - 1
    if degree is not None and degree != n_deg:
        raise DegreeMismatch(
            f"degree {degree} does not match {samples.count} control samples"
        )
    ts = samples.t
    mats = samples.matrices
    span = float(ts[-1] - ts[0])
    base = [
        geodesic(mats[i], mats[i + 1], samples.matrix_class, tol)
        for i in range(n_deg)
    ]

    def ev(t):
        s = (t - ts[0]) / span
        pts = [g(s) for g in base]
        while len(pts) > 1:
            pts = [
                geodesic(pts[i], pts[i + 1], samples.matrix_class, tol)(s)
                for i in range(len(pts) - 1)
            ]
        return pts[0]

    return Curve(
        float(ts[0]),
        float(ts[-1]),
        samples.n,
        samples.matrix_class,
        interpolatory=False,
        consistent=True,
        claimed_order=None,
        _evaluator=ev,
    )


def _log_exp_pair(matrix_class, tol):
    if matrix_class is MatrixClass.SPD:
        return lambda a: spd_log(a, tol), lambda x: spd_exp(x, tol)
    if matrix_class is MatrixClass.SO:
        return lambda a: so_log(a, tol), lambda x: so_exp(x, tol)
    if matrix_class in (MatrixClass.DIAGONAL, MatrixClass.POSITIVE_SCALAR_1X1):

        def dlog(a):
            d = np.diag(a)
            if np.min(d) <= tol:
                raise ClassViolation(
                    "logarithm undefined for nonpositive diagonal entries"
                )
            return np.diag(np.log(d))

        return dlog, lambda x: np.diag(np.exp(np.diag(x)))
    if matrix_class in (
        MatrixClass.UNIT_LOWER_TRIANGULAR,
        MatrixClass.UNIT_UPPER_TRIANGULAR,
    ):
        return (
            lambda a: unit_triangular_log(a, tol),
            lambda x: unit_triangular_exp(x, tol),
        )
    raise MvfError(f"no log/exp pair for class {matrix_class.value}")


def log_exp_linear(samples, tol=None):
    """Piecewise linear interpolation in the class logarithm. Order two.

    The class logarithm must exist at every sample; failures surface at
    construction time, naming the offending sample where possible.
    """
    tol = resolve_tol(tol)
    _require_count(samples, 2, "log_exp_linear")
    log_fn, exp_fn = _log_exp_pair(samples.matrix_class, tol)
    ts = samples.t
    logs = []
    for i in range(samples.count):
        try:
            logs.append(log_fn(samples.matrices[i]))
        except LogBranchFailure as exc:
            raise LogBranchFailure(f"{exc} (sample {i})", interval=i) from None
    logs = np.stack(logs)

    def ev(t):
        i = _interval_index(ts, t)
        s = (t - ts[i]) / (ts[i + 1] - ts[i])
        return exp_fn((1.0 - s) * logs[i] + s * logs[i + 1])

    return Curve(
        float(ts[0]),
        float(ts[-1]),
        samples.n,
        samples.matrix_class,
        interpolatory=True,
        consistent=True,
        claimed_order=2,
        _evaluator=ev,
    )


def positive_scalar(samples, tol=None):
    """Piecewise geometric interpolation of positive scalars. Order two."""
    tol = resolve_tol(tol)
    if samples.n != 1:
        raise MvfError("positive_scalar operates on 1x1 samples")
    for i in range(samples.count):
        if samples.matrices[i, 0, 0] <= tol:
            raise NonPositiveSample(i)
    curve = log_exp_linear(
        ParamSamples(
            samples.t,
            samples.matrices,
            MatrixClass.POSITIVE_SCALAR_1X1,
            tol,
        ),
        tol,
    )
    return curve


def piecewise_constant(samples):
    """Nearest-sample step curve, ties to the left sample. Order one.

    Deliberately crude: interpolatory and consistent, but only first order
    accurate, which makes it the reference low-order factor in product
    order studies.
    """
    _require_count(samples, 1, "piecewise_constant")
    ts = samples.t
    mats = samples.matrices
    if samples.count == 1:
        mids = np.empty(0)
    else:
        mids = 0.5 * (ts[:-1] + ts[1:])

    def ev(t):
        i = int(np.searchsorted(mids, t, side="left"))
        return mats[i].copy()

    return Curve(
        float(ts[0]),
        float(ts[-1]),
        samples.n,
        samples.matrix_class,
        interpolatory=True,
        consistent=True,
        claimed_order=1,
        _evaluator=ev,
    )


def diagonal_elementwise(samples, inner=None, tol=None):
    """Per-entry interpolation of diagonal matrices with fixed signs.

    Each diagonal position must keep one sign across all samples and never
    vanish. Magnitudes are interpolated by the inner scalar operator and
    the common sign is restored afterwards.
    """
    tol = resolve_tol(tol)
    _require_count(samples, 2, "diagonal_elementwise")
    if samples.matrix_class not in (
        MatrixClass.DIAGONAL,
        MatrixClass.DIAGONAL_NONZERO,
        MatrixClass.POSITIVE_SCALAR_1X1,
    ):
        raise MvfError(
            f"diagonal_elementwise does not support class "
            f"{samples.matrix_class.value}"
        )
    if inner is None:
        inner = OperatorSpec("positive_scalar")
    values = np.stack([np.diag(samples.matrices[i]) for i in range(samples.count)])
    m, n = values.shape
    for i in range(m):
        for j in range(n):
            if abs(values[i, j]) <= tol:
                raise ZeroDiagonal(
                    f"diagonal position {j} vanishes at sample {i}"
                )
    signs = np.sign(values[0])
    for i in range(1, m):
        for j in range(n):
            if np.sign(values[i, j]) != signs[j]:
                raise SignPatternViolation(i, j)
    scalar_curves = []
    for j in range(n):
        scalar_samples = ParamSamples.from_scalars(
            samples.t, np.abs(values[:, j]), MatrixClass.POSITIVE_SCALAR_1X1, tol
        )
        scalar_curves.append(inner.build(scalar_samples, tol))

    def ev(t):
        return np.diag(signs * np.array([c(t)[0, 0] for c in scalar_curves]))

    return Curve(
        float(samples.t[0]),
        float(samples.t[-1]),
        n,
        MatrixClass.DIAGONAL_NONZERO
        if samples.matrix_class is not MatrixClass.POSITIVE_SCALAR_1X1
        else samples.matrix_class,
        interpolatory=all(c.interpolatory for c in scalar_curves),
        consistent=all(c.consistent for c in scalar_curves),
        claimed_order=inner.claimed_order,
        _evaluator=ev,
    )


_KINDS = {
    "geodesic_piecewise",
    "bernstein_de_casteljau",
    "log_exp_linear",
    "positive_scalar",
    "diagonal_elementwise",
    "piecewise_constant",
}


@dataclass(frozen=True)
class OperatorSpec:
    """A buildable description of a base operator.

    ``degree`` applies to bernstein_de_casteljau, ``inner`` to
    diagonal_elementwise.
    """

    kind: str
    degree: int = None
    inner: "OperatorSpec" = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(
                f"unknown operator kind {self.kind!r}; expected one of "
                f"{sorted(_KINDS)}"
            )

    @property
    def interpolatory(self):
        if self.kind == "bernstein_de_casteljau":
            return False
        if self.kind == "diagonal_elementwise":
            return (self.inner or OperatorSpec("positive_scalar")).interpolatory
        return True

    @property
    def consistent(self):
        return True

    @property
    def claimed_order(self):
        if self.kind == "piecewise_constant":
            return 1
        if self.kind == "bernstein_de_casteljau":
            return None
        if self.kind == "diagonal_elementwise":
            return (self.inner or OperatorSpec("positive_scalar")).claimed_order
        return 2

    def build(self, samples, tol=None):
        if self.kind == "geodesic_piecewise":
            return geodesic_piecewise(samples, tol)
        if self.kind == "bernstein_de_casteljau":
            return bernstein_de_casteljau(samples, self.degree, tol)
        if self.kind == "log_exp_linear":
            return log_exp_linear(samples, tol)
        if self.kind == "positive_scalar":
            return positive_scalar(samples, tol)
        if self.kind == "diagonal_elementwise":
            return diagonal_elementwise(samples, self.inner, tol)
        if self.kind == "piecewise_constant":
            return piecewise_constant(samples)
        raise AssertionError(self.kind)

    def scalar_counterpart(self):
        """The operator this one induces on 1x1 sample sets."""
        if self.kind == "diagonal_elementwise":
            return (self.inner or OperatorSpec("positive_scalar")).scalar_counterpart()
        return self

    @classmethod
    def from_config(cls, config):
        """Build from a JSON-style dict: {"kind": ..., "degree": ..., "inner": ...}."""
        if not isinstance(config, dict) or "kind" not in config:
            raise ValueError("operator config must be a dict with a 'kind' key")
        extra = set(config) - {"kind", "degree", "inner"}
        if extra:
            raise ValueError(f"unknown operator config keys: {sorted(extra)}")
        inner = config.get("inner")
        return cls(
            config["kind"],
            degree=config.get("degree"),
            inner=cls.from_config(inner) if inner else None,
        )


def build_curve(spec, samples, tol=None):
    """Build a Curve from an OperatorSpec or anything with a build method."""
    return spec.build(samples, tol)
