import numpy as np
import pytest

from mvfapprox.analysis import (
    TRUTHS,
    approximation_order,
    check_det_commutativity,
    check_homogeneity,
    holder_exponent,
)
from mvfapprox.core import MatrixClass, ParamSamples, check_class
from mvfapprox.errors import ClassViolation, MvfError
from mvfapprox.operators import OperatorSpec, geodesic_piecewise
from mvfapprox.product import PolarProductOperator, product_operator
from mvfapprox.sampling import random_det_pos

from conftest import rot2


# ---------------------------------------------------------------------------
# order measurement


def test_geodesic_exact_on_spd_one_parameter_group():
    truth = TRUTHS["spd_exp_curve"]
    report = approximation_order(
        truth.fn,
        OperatorSpec("geodesic_piecewise"),
        truth.domain,
        truth.matrix_class,
        levels=4,
    )
    assert report.exact  # errors at noise floor on every level


def test_geodesic_exact_on_rotation_curve():
    truth = TRUTHS["rot_curve"]
    report = approximation_order(
        truth.fn,
        OperatorSpec("geodesic_piecewise"),
        truth.domain,
        truth.matrix_class,
        levels=4,
    )
    assert report.exact


@pytest.mark.parametrize(
    "kind,lo,hi",
    [
        ("geodesic_piecewise", 1.8, 2.2),
        ("log_exp_linear", 1.8, 2.2),
        ("piecewise_constant", 0.8, 1.2),
    ],
)
def test_measured_orders_on_curved_spd_truth(kind, lo, hi):
    truth = TRUTHS["spd_curved"]
    report = approximation_order(
        truth.fn,
        OperatorSpec(kind),
        truth.domain,
        truth.matrix_class,
        levels=5,
    )
    assert not report.exact
    assert lo <= report.slope <= hi


def test_polar_product_order_follows_factors():
    truth = TRUTHS["polar_curve"]
    op = PolarProductOperator()
    report = approximation_order(
        truth.fn, op, truth.domain, truth.matrix_class, levels=5
    )
    assert 1.8 <= report.slope <= 2.2
    slow = PolarProductOperator(so_spec=OperatorSpec("piecewise_constant"))
    report = approximation_order(
        truth.fn, slow, truth.domain, truth.matrix_class, levels=5
    )
    assert 0.75 <= report.slope <= 1.25


def test_order_needs_at_least_four_levels():
    truth = TRUTHS["spd_exp_curve"]
    with pytest.raises(ValueError):
        approximation_order(
            truth.fn,
            OperatorSpec("geodesic_piecewise"),
            truth.domain,
            truth.matrix_class,
            levels=3,
        )


def test_order_report_mesh_halving_bookkeeping():
    truth = TRUTHS["spd_curved"]
    report = approximation_order(
        truth.fn,
        OperatorSpec("log_exp_linear"),
        truth.domain,
        truth.matrix_class,
        levels=4,
    )
    assert len(report.hs) == 4
    hs = np.asarray(report.hs)
    errors = np.asarray(report.errors)
    np.testing.assert_allclose(hs[:-1] / hs[1:], 2.0)
    assert np.all(errors[:-1] > errors[1:])


# ---------------------------------------------------------------------------
# Hoelder exponents


def test_sqrt_rotation_truth_has_half_exponent():
    truth = TRUTHS["sqrt_rot"]
    report = holder_exponent(truth.fn, domain=truth.domain)
    assert 0.45 <= report.exponent <= 0.55
    assert not report.exact


def test_sqrt_rotation_approximant_keeps_half_exponent():
    truth = TRUTHS["sqrt_rot"]
    samples = truth.samples(2**15)
    curve = geodesic_piecewise(samples)
    report = holder_exponent(curve)
    assert 0.45 <= report.exponent <= 0.55


def test_smooth_approximant_measures_lipschitz():
    truth = TRUTHS["spd_curved"]
    curve = geodesic_piecewise(truth.samples(256))
    report = holder_exponent(curve)
    assert report.exponent >= 0.95


def test_constant_curve_is_flagged_exact():
    samples = ParamSamples.from_scalars([0.0, 1.0], [3.0, 3.0])
    curve = geodesic_piecewise(samples)
    report = holder_exponent(curve)
    assert report.exact


# ---------------------------------------------------------------------------
# structure checkers


def test_det_commutativity_holds_for_polar_product(rng):
    ts = np.linspace(0.0, 1.0, 5)
    mats = np.stack([random_det_pos(3, rng) for _ in ts])
    samples = ParamSamples(ts, mats, MatrixClass.GENERAL_INVERTIBLE)
    report = check_det_commutativity(PolarProductOperator(), samples)
    assert report.ok
    assert report.max_rel_error <= 1e-8
    assert isinstance(report.ok, bool)


def test_det_commutativity_rejects_mixed_determinant_signs(rng):
    ts = np.linspace(0.0, 1.0, 2)
    flip = np.diag([-1.0, 1.0, 1.0])
    mats = np.stack([random_det_pos(3, rng), random_det_pos(3, rng) @ flip])
    samples = ParamSamples(ts, mats, MatrixClass.GENERAL_INVERTIBLE)
    with pytest.raises(MvfError):
        check_det_commutativity(PolarProductOperator(), samples)


def test_homogeneity_holds_for_polar_product(rng):
    ts = np.linspace(0.0, 1.0, 4)
    mats = np.stack([random_det_pos(3, rng) for _ in ts])
    samples = ParamSamples(ts, mats, MatrixClass.GENERAL_INVERTIBLE)
    report = check_homogeneity(PolarProductOperator(), samples)
    assert report.ok


def test_homogeneity_scaling_can_leave_the_class(rng):
    # scaling rotation samples off SO must surface as a class violation,
    # not silently pass
    ts = np.linspace(0.0, 1.0, 3)
    mats = np.stack([rot2(t) for t in ts])
    samples = ParamSamples(ts, mats, MatrixClass.SO)
    with pytest.raises(ClassViolation):
        check_homogeneity(OperatorSpec("geodesic_piecewise"), samples)


# ---------------------------------------------------------------------------
# truth catalog


def test_truth_catalog_classes_and_domains():
    expected = {
        "spd_exp_curve": (MatrixClass.SPD, (0.0, 1.0)),
        "rot_curve": (MatrixClass.SO, (0.0, 1.5)),
        "spd_curved": (MatrixClass.SPD, (0.0, 1.0)),
        "polar_curve": (MatrixClass.GENERAL_INVERTIBLE, (0.0, 1.0)),
        "sqrt_rot": (MatrixClass.SO, (0.0, 1.0)),
    }
    assert set(TRUTHS) == set(expected)
    for name, (cls, domain) in expected.items():
        truth = TRUTHS[name]
        assert truth.matrix_class is cls
        assert truth.domain == domain
        value = truth.fn(domain[0] + 0.37 * (domain[1] - domain[0]))
        assert check_class(value, cls)


def test_truth_samples_are_valid_param_samples():
    samples = TRUTHS["polar_curve"].samples(8)
    assert samples.count == 9
    assert samples.matrix_class is MatrixClass.GENERAL_INVERTIBLE
    curve = product_operator("polar").build(samples)
    mid = 0.5 * (samples.t[3] + samples.t[4])
    assert check_class(curve(mid), MatrixClass.GENERAL_INVERTIBLE)
