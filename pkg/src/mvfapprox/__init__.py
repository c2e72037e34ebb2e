"""Structure-preserving approximation of matrix-valued functions.

Unique decompositions (polar, spectral, LDU, Cholesky, QR), distances and
geodesics on the factor classes, interpolation operators that stay inside
each class, and empirical order and regularity diagnostics.
"""

from ._backend import BACKEND_NAME
from .analysis import (
    DetCommutativityReport,
    HolderReport,
    HomogeneityReport,
    OrderReport,
    TRUTHS,
    TruthCurve,
    approximation_order,
    check_det_commutativity,
    check_homogeneity,
    holder_exponent,
)
from .checks import CheckResult, SUITES, run_suite
from .core import (
    DEFAULT_TOL,
    ClassCheck,
    MatrixClass,
    ParamSamples,
    as_matrix,
    check_class,
    default_tol,
    frobenius_norm,
    principal_minors,
    require_class,
    so_exp,
    so_log,
    spd_exp,
    spd_log,
    spd_power,
    spd_sqrt,
    unit_triangular_exp,
    unit_triangular_log,
)
from .decompositions import (
    DECOMPOSITIONS,
    Factorization,
    cholesky,
    decompose,
    ldu,
    polar,
    qr_pos,
    spectral_sorted,
)
from .errors import (
    ClassViolation,
    DegenerateSpectrum,
    DegreeMismatch,
    LogBranchFailure,
    MvfError,
    NonPositiveDeterminant,
    NonPositiveSample,
    NotSPD,
    NotSkewSymmetric,
    NotSymmetric,
    SampleFileError,
    SelfCheckError,
    SignPatternViolation,
    SignVectorMismatch,
    SingularInput,
    ZeroDiagonal,
    ZeroPrincipalMinor,
)
from .fileio import (
    dumps_json,
    format_float,
    load_config,
    load_samples,
    read_curve_csv,
    save_samples,
    write_curve_csv,
    write_diagnostics_csv,
)
from .metrics import (
    Geodesic,
    MajorizationReport,
    Metric,
    PsiFunction,
    PsiReport,
    british_railway_metric,
    check_psi,
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
    product_metric,
    product_psi_metric,
    riemannian_spd_metric,
)
from .operators import (
    Curve,
    OperatorSpec,
    bernstein_de_casteljau,
    build_curve,
    diagonal_elementwise,
    geodesic_piecewise,
    log_exp_linear,
    piecewise_constant,
    positive_scalar,
)
from .product import (
    CholeskyProductData,
    LduSignPreservingOperator,
    PolarProductOperator,
    SpectralConjugationOperator,
    product_operator,
)
from .sampling import DEFAULT_SEED, random_for_class, rng_from_seed

__version__ = "0.1.0"

__all__ = [
    "BACKEND_NAME",
    "DEFAULT_SEED",
    "DEFAULT_TOL",
    "DECOMPOSITIONS",
    "SUITES",
    "TRUTHS",
    "CheckResult",
    "ClassCheck",
    "ClassViolation",
    "CholeskyProductData",
    "Curve",
    "DegenerateSpectrum",
    "DegreeMismatch",
    "DetCommutativityReport",
    "Factorization",
    "Geodesic",
    "HolderReport",
    "HomogeneityReport",
    "LduSignPreservingOperator",
    "LogBranchFailure",
    "MajorizationReport",
    "MatrixClass",
    "Metric",
    "MvfError",
    "NonPositiveDeterminant",
    "NonPositiveSample",
    "NotSPD",
    "NotSkewSymmetric",
    "NotSymmetric",
    "OperatorSpec",
    "OrderReport",
    "ParamSamples",
    "PolarProductOperator",
    "PsiFunction",
    "PsiReport",
    "SampleFileError",
    "SelfCheckError",
    "SignPatternViolation",
    "SignVectorMismatch",
    "SingularInput",
    "SpectralConjugationOperator",
    "TruthCurve",
    "ZeroDiagonal",
    "ZeroPrincipalMinor",
    "approximation_order",
    "as_matrix",
    "bernstein_de_casteljau",
    "british_railway_metric",
    "build_curve",
    "check_class",
    "check_det_commutativity",
    "check_homogeneity",
    "check_psi",
    "cholesky",
    "decompose",
    "default_tol",
    "diagonal_elementwise",
    "dumps_json",
    "format_float",
    "frobenius_metric",
    "frobenius_norm",
    "geodesic",
    "geodesic_piecewise",
    "geodesic_so_metric",
    "holder_exponent",
    "hybrid_metric",
    "ldu",
    "load_config",
    "load_samples",
    "log_diag_metric",
    "log_exp_linear",
    "majorization_probe",
    "metric_eval",
    "p_product",
    "piecewise_constant",
    "polar",
    "positive_scalar",
    "principal_minors",
    "procrustes_metric",
    "product_geodesic",
    "product_metric",
    "product_operator",
    "product_psi_metric",
    "qr_pos",
    "random_for_class",
    "read_curve_csv",
    "require_class",
    "riemannian_spd_metric",
    "rng_from_seed",
    "run_suite",
    "save_samples",
    "so_exp",
    "so_log",
    "spd_exp",
    "spd_log",
    "spd_power",
    "spd_sqrt",
    "spectral_sorted",
    "unit_triangular_exp",
    "unit_triangular_log",
    "write_curve_csv",
    "write_diagnostics_csv",
]
