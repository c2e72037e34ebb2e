import numpy as np
import pytest

from mvfapprox.core import MatrixClass, frobenius_norm
from mvfapprox.errors import MvfError, NotSPD
from mvfapprox.metrics import (
    PsiFunction,
    british_railway_dist,
    british_railway_metric,
    check_psi,
    frobenius_dist,
    frobenius_metric,
    geodesic,
    geodesic_so_dist,
    geodesic_so_metric,
    hybrid_dist,
    log_diag_dist,
    majorization_probe,
    metric_eval,
    p_product,
    procrustes_dist,
    product_geodesic,
    product_psi_metric,
    riemannian_spd_dist,
    riemannian_spd_metric,
)
from mvfapprox.sampling import random_det_pos, random_so, random_spd

from conftest import rot2


def triangle_holds(metric, a, b, c, slack=1e-12):
    lhs = metric(a, c)
    rhs = metric(a, b) + metric(b, c)
    return lhs <= rhs + slack * max(1.0, rhs)


# ---------------------------------------------------------------------------
# individual distances


def test_frobenius_known_value():
    assert frobenius_dist(np.zeros((2, 2)), np.array([[3.0, 0.0], [0.0, 4.0]])) == 5.0


def test_riemannian_commuting_closed_form():
    a = np.diag([1.0, 1.0])
    b = np.diag([np.e**2, np.e**2])
    np.testing.assert_allclose(riemannian_spd_dist(a, b), 2.0 * np.sqrt(2.0), rtol=1e-12)


def test_riemannian_congruence_invariance(rng):
    # the affine-invariant distance is unchanged by congruence with any
    # invertible matrix; the implementation never uses this directly
    a, b = random_spd(3, rng), random_spd(3, rng)
    g = random_det_pos(3, rng)
    base = riemannian_spd_dist(a, b)
    moved = riemannian_spd_dist(g.T @ a @ g, g.T @ b @ g)
    np.testing.assert_allclose(moved, base, rtol=1e-8)


def test_riemannian_rejects_non_spd():
    with pytest.raises(NotSPD):
        riemannian_spd_dist(np.diag([1.0, -1.0]), np.eye(2))


def test_geodesic_so_planar_closed_form():
    # the relative rotation angle delta gives distance sqrt(2) |delta|
    np.testing.assert_allclose(
        geodesic_so_dist(rot2(0.25), rot2(1.0)), np.sqrt(2.0) * 0.75, rtol=1e-12
    )


def test_geodesic_so_bi_invariance(rng):
    a, b, q = random_so(3, rng), random_so(3, rng), random_so(3, rng)
    np.testing.assert_allclose(
        geodesic_so_dist(q @ a, q @ b), geodesic_so_dist(a, b), rtol=1e-9
    )


def test_log_diag_closed_form():
    a = np.diag([1.0, np.e])
    b = np.diag([np.e, np.e])
    np.testing.assert_allclose(log_diag_dist(a, b), 1.0, rtol=1e-12)


def test_procrustes_matches_sorted_eigenvalues(rng):
    a, b = random_spd(3, rng), random_spd(3, rng)
    want = np.linalg.norm(np.linalg.eigvalsh(a) - np.linalg.eigvalsh(b))
    np.testing.assert_allclose(procrustes_dist(a, b), want, rtol=1e-9)


def test_procrustes_conjugation_invariant(rng):
    a = random_spd(3, rng)
    q = random_so(3, rng)
    assert procrustes_dist(a, q.T @ a @ q) <= 1e-10


def test_hybrid_is_exact_sum(rng):
    a, b = random_spd(3, rng), random_spd(3, rng)
    for beta in (0.1, 1.0, 10.0):
        want = riemannian_spd_dist(a, b) + beta * procrustes_dist(a, b)
        np.testing.assert_allclose(hybrid_dist(a, b, beta), want, rtol=1e-12)
    with pytest.raises(ValueError):
        hybrid_dist(a, b, 0.0)


def test_british_railway_values():
    a = np.eye(2)
    assert british_railway_dist(a, a.copy()) == 0.0
    b = a + 1e-300  # any difference, however small, costs both norms
    np.testing.assert_allclose(british_railway_dist(a, b), 2.0 * np.sqrt(2.0))


# ---------------------------------------------------------------------------
# psi combiners


def test_check_psi_sum_passes():
    report = check_psi(PsiFunction(lambda x, y: x + y, "sum"))
    assert report.ok
    assert report.failed_conditions() == []


def test_check_psi_product_fails_definiteness():
    report = check_psi(PsiFunction(lambda x, y: x * y, "xy"))
    assert not report.ok
    assert "nonneg_definite" in report.failed_conditions()
    assert report.counterexamples


def test_check_psi_squares_fail_homogeneity_only():
    report = check_psi(PsiFunction(lambda x, y: x * x + y * y, "squares"))
    assert report.failed_conditions() == ["homogeneous"]


def test_p_product_family():
    for p in (1.0, 2.0, np.inf):
        assert check_psi(p_product(p)).ok
    assert p_product(np.inf)(3.0, 4.0) == 4.0
    assert p_product(2.0)(3.0, 4.0) == 5.0
    with pytest.raises(ValueError):
        p_product(0.5)


def test_ensure_valid_raises_with_condition_names():
    psi = PsiFunction(lambda x, y: x * y, "xy")
    with pytest.raises(MvfError, match="nonneg_definite"):
        psi.ensure_valid()


# ---------------------------------------------------------------------------
# metric descriptors and axioms


@pytest.mark.parametrize(
    "factory,cls",
    [
        (lambda: frobenius_metric(), MatrixClass.GENERAL_INVERTIBLE),
        (lambda: riemannian_spd_metric(), MatrixClass.SPD),
        (lambda: geodesic_so_metric(), MatrixClass.SO),
        (lambda: hybrid_metric_case(), MatrixClass.SPD),
        (lambda: product_psi_metric(p_product(2.0)), MatrixClass.GENERAL_INVERTIBLE),
    ],
)
def test_metric_axiom_fuzz(factory, cls, rng):
    from mvfapprox.sampling import random_for_class

    metric = factory()
    fn = lambda a, b: metric_eval(metric, a, b)
    for _ in range(30):
        a = random_for_class(cls, 3, rng)
        b = random_for_class(cls, 3, rng)
        c = random_for_class(cls, 3, rng)
        assert fn(a, a) <= 1e-12
        np.testing.assert_allclose(fn(a, b), fn(b, a), rtol=1e-9, atol=1e-12)
        assert triangle_holds(fn, a, b, c)


def hybrid_metric_case():
    from mvfapprox.metrics import hybrid_metric

    return hybrid_metric(1.0)


def test_product_metric_requires_two_factors(rng):
    metric = product_psi_metric(p_product(1.0), decomposition="ldu")
    a, b = random_det_pos(2, rng), random_det_pos(2, rng)
    with pytest.raises(MvfError, match="two-factor"):
        metric(a, b)


def test_metric_descriptor_callable(rng):
    metric = riemannian_spd_metric()
    a, b = random_spd(2, rng), random_spd(2, rng)
    np.testing.assert_allclose(metric(a, b), riemannian_spd_dist(a, b))


# ---------------------------------------------------------------------------
# geodesics


def test_spd_geodesic_commuting_closed_form():
    a = np.diag([1.0, 4.0])
    b = np.diag([9.0, 16.0])
    g = geodesic(a, b, MatrixClass.SPD)
    np.testing.assert_allclose(g(0.5), np.diag([3.0, 8.0]), rtol=1e-12)


def test_geodesic_endpoints_and_domain(rng):
    a, b = random_spd(3, rng), random_spd(3, rng)
    g = geodesic(a, b, MatrixClass.SPD)
    np.testing.assert_allclose(g(0.0), a, atol=1e-11)
    np.testing.assert_allclose(g(1.0), b, atol=1e-10)
    with pytest.raises(ValueError):
        g(1.5)
    with pytest.raises(ValueError):
        g(-0.1)


@pytest.mark.parametrize(
    "cls,dist",
    [
        (MatrixClass.SPD, riemannian_spd_dist),
        (MatrixClass.SO, geodesic_so_dist),
        (MatrixClass.DIAGONAL, log_diag_dist),
    ],
)
def test_geodesic_metric_property(cls, dist, rng):
    from mvfapprox.sampling import random_for_class

    for _ in range(15):
        a = random_for_class(cls, 3, rng)
        b = random_for_class(cls, 3, rng)
        g = geodesic(a, b, cls)
        d = dist(a, b)
        for t in (0.2, 0.5, 0.8):
            np.testing.assert_allclose(
                dist(g(t), b), (1.0 - t) * d, rtol=1e-8, atol=1e-10
            )


def test_geodesic_unsupported_class(rng):
    a = np.array([[1.0, 0.0], [0.5, 1.0]])
    with pytest.raises(MvfError):
        geodesic(a, a, MatrixClass.UNIT_LOWER_TRIANGULAR)


def test_product_geodesic_proportionality(rng):
    metric = product_psi_metric(p_product(2.0))
    for _ in range(10):
        a, b = random_det_pos(3, rng), random_det_pos(3, rng)
        g = product_geodesic(a, b)
        d = metric(a, b)
        for t in (0.25, 0.5, 0.75):
            np.testing.assert_allclose(metric(a, g(t)), t * d, rtol=1e-8)
            np.testing.assert_allclose(metric(g(t), b), (1.0 - t) * d, rtol=1e-8)


def test_product_geodesic_polar_only(rng):
    a, b = random_det_pos(2, rng), random_det_pos(2, rng)
    with pytest.raises(MvfError):
        product_geodesic(a, b, decomposition="qr")


# ---------------------------------------------------------------------------
# majorization probe


def test_probe_self_comparison(rng):
    rep = majorization_probe(
        frobenius_metric(MatrixClass.SPD),
        frobenius_metric(MatrixClass.SPD),
        sample_count=30,
        rng=rng,
    )
    assert not rep.unbounded
    np.testing.assert_allclose(rep.constant, 1.0, rtol=1e-12)
    assert rep.pairs_used > 0


def test_probe_railway_unbounded(rng):
    rep = majorization_probe(
        british_railway_metric(MatrixClass.SPD),
        frobenius_metric(MatrixClass.SPD),
        sample_count=30,
        rng=rng,
    )
    assert rep.unbounded


def test_probe_riemannian_bounded_on_draws(rng):
    rep = majorization_probe(
        riemannian_spd_metric(),
        frobenius_metric(MatrixClass.SPD),
        sample_count=50,
        rng=rng,
    )
    assert not rep.unbounded
    assert np.isfinite(rep.constant)


def test_probe_rejects_mismatched_classes(rng):
    with pytest.raises(ValueError):
        majorization_probe(riemannian_spd_metric(), frobenius_metric(), rng=rng)
