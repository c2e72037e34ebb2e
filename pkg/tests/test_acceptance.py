"""End-to-end acceptance checks.

Each test exercises one published guarantee at its stated tolerance and
prints a single pass/fail line so the run reads as a checklist.
"""

import math
import time
from contextlib import contextmanager

import numpy as np
import pytest

from mvfapprox.analysis import (
    TRUTHS,
    approximation_order,
    check_det_commutativity,
    check_homogeneity,
    holder_exponent,
)
from mvfapprox.core import (
    MatrixClass,
    ParamSamples,
    check_class,
    principal_minors,
)
from mvfapprox.decompositions import DECOMPOSITIONS, cholesky, decompose, spectral_sorted
from mvfapprox.errors import SignVectorMismatch
from mvfapprox.metrics import (
    Metric,
    british_railway_metric,
    frobenius_metric,
    geodesic,
    geodesic_so_metric,
    hybrid_metric,
    log_diag_metric,
    majorization_probe,
    metric_eval,
    p_product,
    procrustes_metric,
    product_geodesic,
    product_psi_metric,
    riemannian_spd_metric,
)
from mvfapprox.operators import OperatorSpec, geodesic_piecewise
from mvfapprox.product import (
    CholeskyProductData,
    LduSignPreservingOperator,
    PolarProductOperator,
    SpectralConjugationOperator,
)
from mvfapprox.sampling import (
    random_det_pos,
    random_invertible,
    random_nonzero_minors,
    random_so,
    random_spd,
    rng_from_seed,
)

from conftest import rot2


@contextmanager
def criterion(number, label):
    try:
        yield
    except BaseException:
        print(f"criterion {number:2d} ({label}): FAIL")
        raise
    print(f"criterion {number:2d} ({label}): PASS")


def _sampler_for(kind):
    return {
        "qr": random_invertible,
        "ldu": random_nonzero_minors,
        "polar": random_det_pos,
        "spectral": random_spd,
        "cholesky": random_spd,
    }[kind]


def test_criterion_01_decomposition_round_trip():
    rng = rng_from_seed(101)
    start = time.monotonic()
    with criterion(1, "decomposition round-trip"):
        assert set(DECOMPOSITIONS) == {"qr", "ldu", "polar", "spectral", "cholesky"}
        for n in range(2, 9):
            for kind in sorted(DECOMPOSITIONS):
                gen = _sampler_for(kind)
                for _ in range(1000):
                    f = decompose(kind, gen(n, rng))
                    assert f.residual <= 1e-9
                    for m, cls in f.factors:
                        assert check_class(m, cls)
        elapsed = time.monotonic() - start
        assert elapsed <= 60.0, f"round-trip sweep took {elapsed:.1f}s"


def _axiom_fuzz(metric, draw, rng, triples=1000):
    for _ in range(triples):
        a, b, c = draw(rng), draw(rng), draw(rng)
        dab = metric_eval(metric, a, b)
        dba = metric_eval(metric, b, a)
        scale = 1.0 + dab
        assert abs(dab - dba) <= 1e-10 * scale
        assert metric_eval(metric, a, a) <= 1e-9
        dac = metric_eval(metric, a, c)
        dcb = metric_eval(metric, c, b)
        assert dab <= dac + dcb + 1e-9 * scale


def test_criterion_02_metric_axioms():
    rng = rng_from_seed(202)
    spd = lambda r: random_spd(3, r)
    so = lambda r: random_so(3, r)
    gi = lambda r: random_invertible(3, r)
    detpos = lambda r: random_det_pos(3, r)
    with criterion(2, "metric axiom fuzz"):
        _axiom_fuzz(frobenius_metric(), gi, rng)
        _axiom_fuzz(riemannian_spd_metric(), spd, rng)
        _axiom_fuzz(geodesic_so_metric(), so, rng)
        for beta in (0.1, 1.0, 10.0):
            _axiom_fuzz(hybrid_metric(beta), spd, rng)
        for p in (1, 2, math.inf):
            _axiom_fuzz(product_psi_metric(p_product(p)), detpos, rng)
        # pseudo-metric: all axioms except definiteness, and conjugation
        # by any rotation is invisible
        _axiom_fuzz(procrustes_metric(), spd, rng)
        for _ in range(100):
            a = random_spd(3, rng)
            q = random_so(3, rng)
            assert metric_eval(procrustes_metric(), a, q.T @ a @ q) <= 1e-10


def test_criterion_03_metric_property_of_geodesics():
    rng = rng_from_seed(303)
    ts = np.arange(1, 10) / 10.0
    diag_draw = lambda r: np.diag(np.exp(r.uniform(-1.5, 1.5, 3)))
    cases = [
        (MatrixClass.SPD, lambda r: random_spd(3, r), riemannian_spd_metric()),
        (MatrixClass.SO, lambda r: random_so(3, r), geodesic_so_metric()),
        (MatrixClass.DIAGONAL, diag_draw, log_diag_metric()),
    ]
    with criterion(3, "geodesics realize the metric property"):
        for cls, draw, metric in cases:
            for _ in range(200):
                a, b = draw(rng), draw(rng)
                gamma = geodesic(a, b, cls)
                dab = metric_eval(metric, a, b)
                for t in ts:
                    err = abs(metric_eval(metric, gamma(t), b) - (1.0 - t) * dab)
                    assert err <= 1e-8 * dab
        metric = product_psi_metric(p_product(2))
        for _ in range(200):
            a, b = random_det_pos(3, rng), random_det_pos(3, rng)
            gamma = product_geodesic(a, b, "polar")
            dab = metric_eval(metric, a, b)
            for t in ts:
                err = abs(metric_eval(metric, gamma(t), b) - (1.0 - t) * dab)
                assert err <= 1e-8 * dab


def test_criterion_04_product_geodesic_proportionality():
    rng = rng_from_seed(404)
    ts = np.arange(1, 10) / 10.0
    with criterion(4, "product distance grows linearly along the geodesic"):
        for p in (1, 2):
            metric = product_psi_metric(p_product(p))
            for _ in range(200):
                a, b = random_det_pos(3, rng), random_det_pos(3, rng)
                gamma = product_geodesic(a, b, "polar")
                dab = metric_eval(metric, a, b)
                for t in ts:
                    err = abs(metric_eval(metric, a, gamma(t)) - t * dab)
                    assert err <= 1e-8 * dab


def test_criterion_05_order_of_the_product_follows_the_slowest_factor():
    truth = TRUTHS["polar_curve"]
    start = time.monotonic()
    with criterion(5, "product order equals the factor minimum"):
        mixed = PolarProductOperator(so_spec=OperatorSpec("piecewise_constant"))
        report = approximation_order(
            truth.fn, mixed, truth.domain, truth.matrix_class, levels=5
        )
        assert report.levels_used >= 4
        assert abs(report.slope - 1.0) <= 0.25
        both = PolarProductOperator()
        report = approximation_order(
            truth.fn, both, truth.domain, truth.matrix_class, levels=5
        )
        assert report.levels_used >= 4
        assert abs(report.slope - 2.0) <= 0.25
        elapsed = time.monotonic() - start
        assert elapsed <= 120.0, f"order study took {elapsed:.1f}s"


def test_criterion_06_determinant_stays_positive():
    rng = rng_from_seed(606)
    grid = np.linspace(0.0, 1.0, 1001)
    with criterion(6, "polar product preserves det > 0"):
        for _ in range(100):
            ts = np.linspace(0.0, 1.0, 5)
            mats = np.stack([random_det_pos(3, rng) for _ in ts])
            samples = ParamSamples(ts, mats, MatrixClass.GENERAL_INVERTIBLE)
            curve = PolarProductOperator().build(samples)
            values = np.stack([curve(t) for t in grid])
            assert np.all(np.linalg.det(values) > 0.0)


def test_criterion_07_conjugation_is_rigid_where_the_geodesic_is_not():
    rng = rng_from_seed(2024)
    d = np.diag([1.0, 2.5, 6.0])
    target = np.array([1.0, 2.5, 6.0])
    frames = []
    ts = np.linspace(0.0, 1.0, 5)
    for _ in ts:
        q = spectral_sorted(random_spd(3, rng, min_gap=0.4)).matrices[2]
        frames.append(q.T @ d @ q)
    samples = ParamSamples(ts, np.stack(frames), MatrixClass.SPD)
    with criterion(7, "spectral conjugation keeps the spectrum"):
        curve = SpectralConjugationOperator().build(samples)
        worst = 0.0
        for t in np.linspace(0.0, 1.0, 1001):
            eigs = np.sort(np.linalg.eigvalsh(curve(t)))
            worst = max(worst, float(np.max(np.abs(eigs - target))))
        assert worst <= 1e-9
        # the Riemannian geodesic between the same endpoints lets the
        # spectrum sag: the extreme-eigenvalue ratio moves off 6.0
        mid = geodesic(frames[0], frames[-1], MatrixClass.SPD)(0.5)
        eigs = np.sort(np.linalg.eigvalsh(mid))
        ratio = eigs[-1] / eigs[0]
        assert abs(ratio - 6.0) > 0.25


def test_criterion_08_minor_signs_are_preserved():
    rng = rng_from_seed(808)
    grid = np.linspace(0.0, 1.0, 201)
    with criterion(8, "elimination route preserves minor signs"):
        for _ in range(100):
            pattern = [int(s) for s in rng.choice([-1, 1], size=3)]
            ts = np.linspace(0.0, 1.0, 5)
            mats = np.stack(
                [random_nonzero_minors(3, rng, sign_pattern=pattern) for _ in ts]
            )
            samples = ParamSamples(ts, mats, MatrixClass.GENERAL_INVERTIBLE)
            curve = LduSignPreservingOperator().build(samples)
            want = curve.meta["minor_signs"]
            for t in grid:
                got = np.sign(principal_minors(curve(t)))
                assert np.array_equal(got, want)
        mats = np.stack(
            [
                random_nonzero_minors(3, rng, sign_pattern=[1, 1, 1]),
                random_nonzero_minors(3, rng, sign_pattern=[1, -1, 1]),
            ]
        )
        samples = ParamSamples(
            np.array([0.0, 1.0]), mats, MatrixClass.GENERAL_INVERTIBLE
        )
        with pytest.raises(SignVectorMismatch):
            LduSignPreservingOperator().build(samples)


def test_criterion_09_triangular_data_through_the_spd_lift():
    spd_curved = TRUTHS["spd_curved"].fn

    def chol_truth(t):
        return cholesky(spd_curved(t)).matrices[0]

    ts = np.linspace(0.0, 1.0, 9)
    samples = ParamSamples(
        ts,
        np.stack([chol_truth(t) for t in ts]),
        MatrixClass.LOWER_TRIANGULAR_POS_DIAG,
    )
    with criterion(9, "lift, approximate, re-factor"):
        curve = CholeskyProductData().build(samples)
        for t in np.linspace(0.0, 1.0, 201):
            assert check_class(curve(t), MatrixClass.LOWER_TRIANGULAR_POS_DIAG)
        for t, m in zip(ts, samples.matrices):
            assert np.max(np.abs(curve(t) - m)) <= 1e-8
        # the measured order tracks whichever operator drives the lift
        report = approximation_order(
            chol_truth,
            CholeskyProductData(),
            (0.0, 1.0),
            MatrixClass.LOWER_TRIANGULAR_POS_DIAG,
            levels=5,
        )
        assert abs(report.slope - 2.0) <= 0.25
        report = approximation_order(
            chol_truth,
            CholeskyProductData(spd_spec=OperatorSpec("piecewise_constant")),
            (0.0, 1.0),
            MatrixClass.LOWER_TRIANGULAR_POS_DIAG,
            levels=5,
        )
        assert abs(report.slope - 1.0) <= 0.25


def test_criterion_10_structure_checks_transfer_to_the_product():
    rng = rng_from_seed(1010)
    ts = np.linspace(0.0, 1.0, 5)
    mats = np.stack([random_det_pos(3, rng) for _ in ts])
    samples = ParamSamples(ts, mats, MatrixClass.GENERAL_INVERTIBLE)
    with criterion(10, "determinant commutation and homogeneity"):
        op = PolarProductOperator()
        det_report = check_det_commutativity(op, samples, rel_tol=1e-8)
        assert det_report.ok
        hom_report = check_homogeneity(op, samples, rel_tol=1e-8)
        assert hom_report.ok


def test_criterion_11_bounded_frobenius_unbounded_railway():
    # gamma(t) = e^t rot(t) leaves the identity at unit speed in Frobenius
    # terms but jumps away under the hub-and-spoke distance
    gamma = lambda t: math.exp(t) * rot2(t)
    schedule = [0.1 * 2.0**-k for k in range(1, 25)]
    d_br = british_railway_metric()
    d_f = frobenius_metric()
    with criterion(11, "hub distance stays large while Frobenius shrinks"):
        start = gamma(0.0)
        for t in schedule:
            assert 0.0 < t <= 0.1
            here = gamma(t)
            assert metric_eval(d_br, here, start) >= math.sqrt(2.0)
            assert metric_eval(d_f, here, start) <= 0.2
        probe = majorization_probe(d_br, d_f, rng=rng_from_seed(1111))
        assert probe.unbounded


def test_criterion_12_holder_estimator_sanity():
    with criterion(12, "roughness estimator lands where it should"):
        sqrt_rot = TRUTHS["sqrt_rot"]
        report = holder_exponent(sqrt_rot.fn, domain=sqrt_rot.domain)
        assert abs(report.exponent - 0.5) <= 0.1
        for name, intervals in (("spd_curved", 256), ("spd_exp_curve", 64)):
            truth = TRUTHS[name]
            curve = geodesic_piecewise(truth.samples(intervals))
            report = holder_exponent(curve)
            assert report.exponent >= 0.95
