"""Product operators: decompose samples, approximate factors, multiply back.

Each builder decomposes every sample into unique structured factors, runs a
base operator per factor curve, and multiplies the factor curves pointwise.
Because the decompositions are unique and the factor operators are
interpolatory, the product interpolates the original samples; structural
traits (positive determinant, spectrum, minor signs) survive by
construction.
"""

import weakref
from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .core import MatrixClass, ParamSamples, resolve_tol
from .decompositions import cholesky as cholesky_decomp
from .decompositions import ldu as ldu_decomp
from .decompositions import polar as polar_decomp
from .decompositions import spectral_sorted
from .errors import MvfError, NotSPD, SignVectorMismatch
from .operators import Curve, OperatorSpec

_DECOMP_CACHE = weakref.WeakKeyDictionary()


def _decompose_samples(kind, samples, tol):
    """Per-sample factorization, cached per (samples, kind).

    Failures are re-raised unchanged but annotated with the offending
    sample index.
    """
    per = _DECOMP_CACHE.setdefault(samples, {})
    if kind in per:
        return per[kind]
    fns = {
        "polar": lambda a: polar_decomp(a, tol),
        "ldu": lambda a: ldu_decomp(a),
        "spectral": lambda a: spectral_sorted(a, tol),
        "cholesky": lambda a: cholesky_decomp(a, tol),
    }
    fn = fns[kind]
    rows = []
    for i in range(samples.count):
        try:
            rows.append(fn(samples.matrices[i]))
        except MvfError as exc:
            exc.sample_index = i
            raise
    per[kind] = rows
    return rows


def _factor_samples(samples, rows, position, matrix_class, tol):
    return ParamSamples(
        samples.t,
        np.stack([r.factors[position][0] for r in rows]),
        matrix_class,
        tol,
    )


def _combine_flags(curves):
    orders = [c.claimed_order for c in curves]
    order = None if any(o is None for o in orders) else min(orders)
    return (
        all(c.interpolatory for c in curves),
        all(c.consistent for c in curves),
        order,
    )


@dataclass(frozen=True)
class PolarProductOperator:
    """Positive-determinant samples via A = P Q with P SPD and Q rotation."""

    spd_spec: OperatorSpec = field(default_factory=lambda: OperatorSpec("geodesic_piecewise"))
    so_spec: OperatorSpec = field(default_factory=lambda: OperatorSpec("geodesic_piecewise"))

    def build(self, samples, tol=None):
        tol = resolve_tol(tol)
        rows = _decompose_samples("polar", samples, tol)
        p_curve = self.spd_spec.build(
            _factor_samples(samples, rows, 0, MatrixClass.SPD, tol), tol
        )
        q_curve = self.so_spec.build(
            _factor_samples(samples, rows, 1, MatrixClass.SO, tol), tol
        )
        interp, consist, order = _combine_flags([p_curve, q_curve])
        return Curve(
            p_curve.t_min,
            p_curve.t_max,
            samples.n,
            MatrixClass.GENERAL_INVERTIBLE,
            interpolatory=interp,
            consistent=consist,
            claimed_order=order,
            _evaluator=lambda t: p_curve(t) @ q_curve(t),
            meta={"decomposition": "polar", "factors": (p_curve, q_curve)},
        )

    def scalar_counterpart(self):
        return self.spd_spec.scalar_counterpart()


@dataclass(frozen=True)
class SpectralConjugationOperator:
    """SPD samples via A = Q^T D Q; the approximant's spectrum at time t is
    exactly the interpolated diagonal."""

    so_spec: OperatorSpec = field(default_factory=lambda: OperatorSpec("geodesic_piecewise"))
    diag_spec: OperatorSpec = field(default_factory=lambda: OperatorSpec("diagonal_elementwise"))

    def build(self, samples, tol=None):
        tol = resolve_tol(tol)
        rows = _decompose_samples("spectral", samples, tol)
        q_curve = self.so_spec.build(
            ParamSamples(
                samples.t,
                np.stack([r.factors[2][0] for r in rows]),
                MatrixClass.SO,
                tol,
            ),
            tol,
        )
        d_curve = self.diag_spec.build(
            _factor_samples(samples, rows, 1, MatrixClass.DIAGONAL, tol), tol
        )
        interp, consist, order = _combine_flags([q_curve, d_curve])

        def ev(t):
            q = q_curve(t)
            return q.T @ d_curve(t) @ q

        return Curve(
            q_curve.t_min,
            q_curve.t_max,
            samples.n,
            MatrixClass.SPD,
            interpolatory=interp,
            consistent=consist,
            claimed_order=order,
            _evaluator=ev,
            meta={"decomposition": "spectral", "factors": (q_curve, d_curve)},
        )

    def scalar_counterpart(self):
        return self.diag_spec.scalar_counterpart()


@dataclass(frozen=True)
class LduSignPreservingOperator:
    """Samples with nonzero leading minors via A = L D U.

    All samples must share one principal minor sign vector; the diagonal
    factor then keeps that sign pattern at every t, so the approximant's
    minors never cross zero.
    """

    lower_spec: OperatorSpec = field(default_factory=lambda: OperatorSpec("log_exp_linear"))
    diag_spec: OperatorSpec = field(default_factory=lambda: OperatorSpec("diagonal_elementwise"))
    upper_spec: OperatorSpec = field(default_factory=lambda: OperatorSpec("log_exp_linear"))

    def build(self, samples, tol=None):
        tol = resolve_tol(tol)
        rows = _decompose_samples("ldu", samples, tol)
        signs = [np.sign(r.meta["minors"]) for r in rows]
        for i in range(1, len(signs)):
            if not np.array_equal(signs[0], signs[i]):
                raise SignVectorMismatch(0, i)
        l_curve = self.lower_spec.build(
            _factor_samples(samples, rows, 0, MatrixClass.UNIT_LOWER_TRIANGULAR, tol),
            tol,
        )
        d_curve = self.diag_spec.build(
            _factor_samples(samples, rows, 1, MatrixClass.DIAGONAL_NONZERO, tol),
            tol,
        )
        u_curve = self.upper_spec.build(
            _factor_samples(samples, rows, 2, MatrixClass.UNIT_UPPER_TRIANGULAR, tol),
            tol,
        )
        interp, consist, order = _combine_flags([l_curve, d_curve, u_curve])
        return Curve(
            l_curve.t_min,
            l_curve.t_max,
            samples.n,
            MatrixClass.GENERAL_INVERTIBLE,
            interpolatory=interp,
            consistent=consist,
            claimed_order=order,
            _evaluator=lambda t: l_curve(t) @ d_curve(t) @ u_curve(t),
            meta={
                "decomposition": "ldu",
                "factors": (l_curve, d_curve, u_curve),
                "minor_signs": signs[0].tolist(),
            },
        )

    def scalar_counterpart(self):
        return self.diag_spec.scalar_counterpart()


@dataclass(frozen=True)
class CholeskyProductData:
    """Lower triangular positive diagonal samples, approximated through the
    SPD lift A = L L^T and re-factored at every evaluation."""

    spd_spec: OperatorSpec = field(default_factory=lambda: OperatorSpec("geodesic_piecewise"))

    def build(self, samples, tol=None):
        tol = resolve_tol(tol)
        if samples.matrix_class is not MatrixClass.LOWER_TRIANGULAR_POS_DIAG:
            raise MvfError(
                "cholesky product route expects lower triangular samples "
                "with positive diagonal"
            )
        lifted = ParamSamples(
            samples.t,
            np.stack(
                [samples.matrices[i] @ samples.matrices[i].T for i in range(samples.count)]
            ),
            MatrixClass.SPD,
            tol,
        )
        spd_curve = self.spd_spec.build(lifted, tol)

        def ev(t):
            a = spd_curve(t)
            low, status = _backend.cholesky(0.5 * (a + a.T))
            if status:
                raise NotSPD(
                    f"interpolated matrix lost positivity at pivot {status}"
                )
            return low

        return Curve(
            spd_curve.t_min,
            spd_curve.t_max,
            samples.n,
            MatrixClass.LOWER_TRIANGULAR_POS_DIAG,
            interpolatory=spd_curve.interpolatory,
            consistent=spd_curve.consistent,
            claimed_order=spd_curve.claimed_order,
            _evaluator=ev,
            meta={"decomposition": "cholesky", "factors": (spd_curve,)},
        )

    def scalar_counterpart(self):
        return self.spd_spec.scalar_counterpart()


def product_operator(decomposition, factor_specs=None, tol=None):
    """Builder for the product operator over a sample decomposition.

    polar takes (spd_spec, so_spec); ldu takes (lower, diag, upper).
    spectral and cholesky are available through their named builders. qr is
    rejected: the orthogonal factor is only a rotation when the determinant
    is positive, and the positive-diagonal convention ties the factors
    together in a way no independent pair of factor operators respects.
    """
    if decomposition == "polar":
        specs = factor_specs or (
            OperatorSpec("geodesic_piecewise"),
            OperatorSpec("geodesic_piecewise"),
        )
        if len(specs) != 2:
            raise ValueError("polar product takes exactly two factor operators")
        return PolarProductOperator(*specs)
    if decomposition == "ldu":
        specs = factor_specs or (
            OperatorSpec("log_exp_linear"),
            OperatorSpec("diagonal_elementwise"),
            OperatorSpec("log_exp_linear"),
        )
        if len(specs) != 3:
            raise ValueError("ldu product takes exactly three factor operators")
        return LduSignPreservingOperator(*specs)
    if decomposition == "spectral":
        specs = factor_specs or (
            OperatorSpec("geodesic_piecewise"),
            OperatorSpec("diagonal_elementwise"),
        )
        if len(specs) != 2:
            raise ValueError("spectral product takes exactly two factor operators")
        return SpectralConjugationOperator(*specs)
    if decomposition == "cholesky":
        specs = factor_specs or (OperatorSpec("geodesic_piecewise"),)
        if len(specs) != 1:
            raise ValueError("cholesky product takes exactly one factor operator")
        return CholeskyProductData(*specs)
    if decomposition == "qr":
        raise MvfError(
            "no product operator over qr: the factor classes are not stable "
            "across sign changes of the determinant; use polar or ldu"
        )
    raise ValueError(f"unknown decomposition {decomposition!r}")
