"""Caffarelli-Kohn-Nirenberg inequalities: exact exponents, constants and numerical checks."""
from .constants import (
    ConstantBundle,
    compose_constants,
    hardy_constant,
    interpolation_constant,
    sobolev_constant_bound,
    subcritical_constant,
)
from .identities import KillingFieldSpec, killing_divergence_check, radial_identity_check
from .params import (
    DerivedParams,
    DomainError,
    ParamTuple,
    ValidationReport,
    b_of,
    balance_residual,
    classify,
    derive,
    interpolation_weights,
    kappa_of,
    r_of,
    s_of,
    sigma_from,
    validate,
)
from .quad import (
    IntegralResult,
    QuadConfig,
    annulus_weight_integral,
    surface_area,
    weighted_gradient_norm,
    weighted_norm,
)
from .search import RatioEstimate, estimate_ratio
from .trials import TrialFunction, make_trial
from .verify import (
    CheckReport,
    ScanTable,
    check_ckn,
    check_holder_chain,
    check_interp_split,
    check_simplified,
    check_subcritical,
    scan_sigma,
)

__version__ = "0.1.0"

__all__ = [
    "CheckReport",
    "ConstantBundle",
    "DerivedParams",
    "DomainError",
    "IntegralResult",
    "KillingFieldSpec",
    "ParamTuple",
    "QuadConfig",
    "RatioEstimate",
    "ScanTable",
    "TrialFunction",
    "ValidationReport",
    "annulus_weight_integral",
    "b_of",
    "balance_residual",
    "check_ckn",
    "check_holder_chain",
    "check_interp_split",
    "check_simplified",
    "check_subcritical",
    "classify",
    "compose_constants",
    "derive",
    "estimate_ratio",
    "hardy_constant",
    "interpolation_constant",
    "interpolation_weights",
    "kappa_of",
    "killing_divergence_check",
    "make_trial",
    "r_of",
    "radial_identity_check",
    "s_of",
    "scan_sigma",
    "sigma_from",
    "sobolev_constant_bound",
    "subcritical_constant",
    "surface_area",
    "validate",
    "weighted_gradient_norm",
    "weighted_norm",
]
