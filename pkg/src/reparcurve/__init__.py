"""Tolerance-aware proper reparametrization of rational plane curves."""

from .approxgcd import (
    BivariateGcdResult,
    EgcdCertificate,
    approx_improper_index,
    egcd_uni,
    gcd_degree_profile,
)
from .errorbound import (
    ErrorBoundReport,
    IntervalSpec,
    bound_constants,
    corollary_bounds,
    empirical_max_deviation,
    error_bound_report,
    pole_free_subintervals,
)
from .errors import (
    InputContractError,
    InterpolationDegreeError,
    NoAdmissiblePairError,
    NotMoebiusLikeError,
    PoleInIntervalError,
    ReparcurveError,
    UnstableIndexError,
)
from .numpoly import (
    BiPoly,
    PlaneParametrization,
    Poly,
    RationalFunction,
    approx_eq,
    approx_zero_along,
    cross_difference,
    norm_inf,
    num_cross_difference_R,
)
from .reparam import (
    ReparamReport,
    build_R,
    certify,
    compute_L,
    extract_Qtilde,
    reparametrize,
    simplify_Q,
)
from .resultants import implicitize, leading_form, parametric_resultant_t, resultant_uni

__version__ = "0.1.0"

__all__ = [
    "BiPoly",
    "BivariateGcdResult",
    "EgcdCertificate",
    "ErrorBoundReport",
    "InputContractError",
    "InterpolationDegreeError",
    "IntervalSpec",
    "NoAdmissiblePairError",
    "NotMoebiusLikeError",
    "PlaneParametrization",
    "PoleInIntervalError",
    "Poly",
    "RationalFunction",
    "ReparamReport",
    "ReparcurveError",
    "UnstableIndexError",
    "approx_eq",
    "approx_improper_index",
    "approx_zero_along",
    "bound_constants",
    "build_R",
    "certify",
    "compute_L",
    "corollary_bounds",
    "cross_difference",
    "egcd_uni",
    "empirical_max_deviation",
    "error_bound_report",
    "extract_Qtilde",
    "gcd_degree_profile",
    "implicitize",
    "leading_form",
    "norm_inf",
    "num_cross_difference_R",
    "parametric_resultant_t",
    "pole_free_subintervals",
    "reparametrize",
    "resultant_uni",
    "simplify_Q",
    "__version__",
]
