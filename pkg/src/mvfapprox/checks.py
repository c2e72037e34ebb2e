"""Named self-check suites used by the command line ``check`` verb.

Every suite returns a list of CheckResult rows; a row failing means the
installed package violates one of its own contracts on freshly drawn
inputs, so the caller should distrust downstream results.
"""

from dataclasses import dataclass

import numpy as np

from .analysis import TRUTHS, approximation_order, holder_exponent
from .core import MatrixClass, ParamSamples, check_class, frobenius_norm, principal_minors
from .errors import MvfError, SignVectorMismatch, ZeroPrincipalMinor
from .metrics import (
    PsiFunction,
    check_psi,
    british_railway_metric,
    frobenius_metric,
    geodesic_so_metric,
    hybrid_metric,
    majorization_probe,
    p_product,
    procrustes_metric,
    product_geodesic,
    product_psi_metric,
    riemannian_spd_metric,
)
from .operators import OperatorSpec
from .product import product_operator
from .sampling import DEFAULT_SEED, random_for_class, random_nonzero_minors, rng_from_seed


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _row(name, passed, detail=""):
    return CheckResult(name, bool(passed), detail)


def _guarded(rows, name, fn):
    """Run one check; an exception is a failure, not a crash."""
    try:
        passed, detail = fn()
    except Exception as exc:  # noqa: BLE001 - suites must report, not die
        rows.append(_row(name, False, f"{type(exc).__name__}: {exc}"))
        return
    rows.append(_row(name, passed, detail))


def _triangle_rows(metric, draw, rng, trials=25, slack=1e-12):
    worst = 0.0
    for _ in range(trials):
        a, b, c = draw(rng), draw(rng), draw(rng)
        lhs = metric(a, c)
        rhs = metric(a, b) + metric(b, c)
        worst = max(worst, lhs - rhs - slack * max(1.0, rhs))
        if abs(metric(a, b) - metric(b, a)) > 1e-10 * max(1.0, metric(a, b)):
            return False, "symmetry violated"
        if metric(a, a) > 1e-10:
            return False, "self distance not zero"
    return worst <= 0.0, f"max triangle excess {worst:.3e}"


def suite_metrics(seed=DEFAULT_SEED):
    rng = rng_from_seed(seed)
    rows = []
    cases = [
        ("frobenius", frobenius_metric(), MatrixClass.GENERAL_INVERTIBLE),
        ("riemannian_spd", riemannian_spd_metric(), MatrixClass.SPD),
        ("geodesic_so", geodesic_so_metric(), MatrixClass.SO),
        ("hybrid", hybrid_metric(beta=0.7), MatrixClass.SPD),
        (
            "product_psi",
            product_psi_metric(p_product(2.0)),
            MatrixClass.GENERAL_INVERTIBLE,
        ),
    ]
    for name, metric, cls in cases:
        _guarded(
            rows,
            f"axioms[{name}]",
            lambda m=metric, c=cls: _triangle_rows(
                m, lambda r: random_for_class(c, 3, r), rng
            ),
        )
    _guarded(
        rows,
        "psi[x+y passes]",
        lambda: (
            check_psi(PsiFunction(lambda x, y: x + y, "sum")).ok,
            "",
        ),
    )
    _guarded(
        rows,
        "psi[sqrt(xy) fails homogeneity or definiteness]",
        lambda: (
            not check_psi(
                PsiFunction(lambda x, y: np.sqrt(x * y), "geomean")
            ).ok,
            "",
        ),
    )
    _guarded(
        rows,
        "psi[p_product(2) passes]",
        lambda: (check_psi(p_product(2.0)).ok, ""),
    )

    def pseudo_case():
        m = procrustes_metric()
        a = np.diag([3.0, 1.0])
        q = np.array([[0.0, -1.0], [1.0, 0.0]])
        b = q @ a @ q.T
        d = m(a, b)
        return d < 1e-12 and frobenius_norm(a - b) > 1.0, f"d={d:.2e}"

    _guarded(rows, "procrustes[pseudo: distinct pair at distance 0]", pseudo_case)
    return rows


def suite_operators(seed=DEFAULT_SEED):
    rng = rng_from_seed(seed)
    rows = []
    grid = np.linspace(0.0, 1.0, 33)
    cases = [
        ("geodesic_piecewise", MatrixClass.SPD),
        ("geodesic_piecewise", MatrixClass.SO),
        ("log_exp_linear", MatrixClass.SPD),
        ("log_exp_linear", MatrixClass.UNIT_LOWER_TRIANGULAR),
        ("piecewise_constant", MatrixClass.SPD),
    ]
    for kind, cls in cases:
        def one(kind=kind, cls=cls):
            ts = np.linspace(0.0, 1.0, 5)
            mats = np.stack([random_for_class(cls, 3, rng) for _ in ts])
            samples = ParamSamples(ts, mats, cls)
            curve = OperatorSpec(kind).build(samples)
            interp = max(
                frobenius_norm(curve(t) - m) for t, m in zip(ts, mats)
            )
            closed = all(check_class(curve(t), cls) for t in grid)
            return (
                interp < 1e-9 and closed,
                f"interp={interp:.2e} closed={closed}",
            )

        _guarded(rows, f"{kind}[{cls.value}]", one)

    def consistency():
        a = random_for_class(MatrixClass.SPD, 3, rng)
        ts = np.linspace(0.0, 1.0, 6)
        samples = ParamSamples(ts, np.stack([a] * 6), MatrixClass.SPD)
        worst = 0.0
        for kind in ("geodesic_piecewise", "log_exp_linear", "piecewise_constant"):
            curve = OperatorSpec(kind).build(samples)
            worst = max(worst, max(frobenius_norm(curve(t) - a) for t in grid))
        bern = OperatorSpec("bernstein_de_casteljau", degree=5).build(samples)
        worst = max(worst, max(frobenius_norm(bern(t) - a) for t in grid))
        return worst < 1e-10, f"max drift {worst:.2e}"

    _guarded(rows, "consistency[constant samples]", consistency)

    def bernstein_mid():
        samples = ParamSamples.from_scalars([0.0, 0.5, 1.0], [1.0, 4.0, 1.0])
        curve = OperatorSpec("bernstein_de_casteljau", degree=2).build(samples)
        mid = curve(0.5)[0, 0]
        ends = abs(curve(0.0)[0, 0] - 1.0) + abs(curve(1.0)[0, 0] - 1.0)
        return abs(mid - 2.0) < 1e-12 and ends < 1e-12, f"mid={mid!r}"

    _guarded(rows, "bernstein[endpoints + geometric pyramid]", bernstein_mid)
    return rows


def suite_theorem1(seed=DEFAULT_SEED):
    rng = rng_from_seed(seed)
    rows = []
    metric = product_psi_metric(p_product(2.0))

    _guarded(
        rows,
        "product metric axioms",
        lambda: _triangle_rows(
            metric,
            lambda r: random_for_class(MatrixClass.GENERAL_INVERTIBLE, 3, r),
            rng,
        ),
    )

    def geodesic_property():
        a = random_for_class(MatrixClass.GENERAL_INVERTIBLE, 3, rng)
        b = random_for_class(MatrixClass.GENERAL_INVERTIBLE, 3, rng)
        g = product_geodesic(a, b)
        d = metric(a, b)
        worst = max(
            abs(metric(g(s1), g(s2)) - abs(s2 - s1) * d)
            for s1 in (0.0, 0.3, 0.7)
            for s2 in (0.2, 0.5, 1.0)
        )
        ends = frobenius_norm(g(0.0) - a) + frobenius_norm(g(1.0) - b)
        return (
            worst <= 1e-8 * max(1.0, d) and ends <= 1e-9,
            f"deviation {worst:.2e}",
        )

    _guarded(rows, "product geodesic realizes the distance", geodesic_property)

    def product_interpolation():
        tr = TRUTHS["polar_curve"]
        samples = tr.samples(6)
        curve = product_operator("polar").build(samples)
        interp = max(
            frobenius_norm(curve(t) - samples.matrices[i])
            for i, t in enumerate(samples.t)
        )
        dets = min(
            np.linalg.det(curve(t)) for t in np.linspace(0.0, 1.0, 101)
        )
        return interp < 1e-9 and dets > 0, f"interp={interp:.2e} min det={dets:.3f}"

    _guarded(rows, "polar product interpolates, det stays positive", product_interpolation)
    return rows


def suite_prop2(seed=DEFAULT_SEED):
    rng = rng_from_seed(seed)
    rows = []

    def bounded_pair():
        rep = majorization_probe(
            riemannian_spd_metric(),
            frobenius_metric(MatrixClass.SPD),
            sample_count=60,
            rng=rng,
        )
        return (
            not rep.unbounded and np.isfinite(rep.constant),
            f"C={rep.constant:.3f} over {rep.pairs_used} pairs",
        )

    _guarded(rows, "riemannian vs frobenius bounded on SPD draws", bounded_pair)

    def identity_pair():
        rep = majorization_probe(
            frobenius_metric(MatrixClass.SPD),
            frobenius_metric(MatrixClass.SPD),
            sample_count=40,
            rng=rng,
        )
        return abs(rep.constant - 1.0) < 1e-9, f"C={rep.constant}"

    _guarded(rows, "self comparison has constant one", identity_pair)

    def order_transfer():
        tr = TRUTHS["spd_curved"]
        rep = approximation_order(
            tr, OperatorSpec("geodesic_piecewise"), tr.domain, tr.matrix_class,
            levels=4,
        )
        return (
            rep.slope is not None and 1.7 <= rep.slope <= 2.3,
            f"slope={rep.slope}",
        )

    _guarded(rows, "second order decay under equivalent metric", order_transfer)
    return rows


def suite_alg1(seed=DEFAULT_SEED):
    rng = rng_from_seed(seed)
    rows = []
    signs = np.array([1.0, -1.0, 1.0])
    minor_signs = np.cumprod(signs)
    ts = np.linspace(0.0, 1.0, 5)
    mats = np.stack([random_nonzero_minors(3, rng, signs) for _ in ts])
    samples = ParamSamples(ts, mats, MatrixClass.GENERAL_INVERTIBLE)
    builder = product_operator("ldu")

    def signs_constant():
        curve = builder.build(samples)
        ok = all(
            np.array_equal(np.sign(principal_minors(curve(t))), minor_signs)
            for t in np.linspace(0.0, 1.0, 101)
        )
        interp = max(
            frobenius_norm(curve(t) - m) / frobenius_norm(m)
            for t, m in zip(ts, mats)
        )
        return ok and interp < 1e-9, f"interp={interp:.2e}"

    _guarded(rows, "minor signs constant along the curve", signs_constant)

    def mismatch_rejected():
        bad = mats.copy()
        bad[2] = random_nonzero_minors(3, rng, np.array([1.0, 1.0, 1.0]))
        try:
            builder.build(ParamSamples(ts, bad, MatrixClass.GENERAL_INVERTIBLE))
        except SignVectorMismatch:
            return True, ""
        return False, "mixed sign vectors accepted"

    _guarded(rows, "mixed sign vectors rejected", mismatch_rejected)

    def zero_minor_located():
        bad = mats.copy()
        bad[1] = np.array(
            [[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]]
        )
        try:
            builder.build(ParamSamples(ts, bad, MatrixClass.GENERAL_INVERTIBLE))
        except ZeroPrincipalMinor as exc:
            return (
                str(exc) == "ZeroPrincipalMinor(1)"
                and getattr(exc, "sample_index", None) == 1,
                str(exc),
            )
        return False, "vanishing minor accepted"

    _guarded(rows, "vanishing minor reported with sample index", zero_minor_located)
    return rows


def suite_counterexample(seed=DEFAULT_SEED):
    rng = rng_from_seed(seed)
    rows = []

    def railway_is_metric():
        return _triangle_rows(
            british_railway_metric(MatrixClass.SPD),
            lambda r: random_for_class(MatrixClass.SPD, 3, r),
            rng,
            trials=15,
        )

    _guarded(rows, "railway metric satisfies the axioms", railway_is_metric)

    def railway_unbounded():
        rep = majorization_probe(
            british_railway_metric(MatrixClass.SPD),
            frobenius_metric(MatrixClass.SPD),
            sample_count=40,
            rng=rng,
        )
        return rep.unbounded, f"unbounded={rep.unbounded}"

    _guarded(rows, "railway not majorized by frobenius", railway_unbounded)

    def qr_rejected():
        try:
            product_operator("qr")
        except MvfError:
            return True, ""
        return False, "qr product accepted"

    _guarded(rows, "no qr product family", qr_rejected)

    def rough_truth():
        rep = holder_exponent(TRUTHS["sqrt_rot"], TRUTHS["sqrt_rot"].domain)
        return (
            rep.exponent is not None and 0.4 <= rep.exponent <= 0.6,
            f"exponent={rep.exponent}",
        )

    _guarded(rows, "square root rotation has exponent near one half", rough_truth)
    return rows


SUITES = {
    "metrics": suite_metrics,
    "operators": suite_operators,
    "theorem1": suite_theorem1,
    "prop2": suite_prop2,
    "alg1": suite_alg1,
    "counterexample": suite_counterexample,
}


def run_suite(name, seed=DEFAULT_SEED):
    if name not in SUITES:
        raise ValueError(
            f"unknown suite {name!r}; expected one of {sorted(SUITES)}"
        )
    return SUITES[name](seed)
