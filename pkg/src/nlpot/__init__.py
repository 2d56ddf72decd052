"""Capacities, Green functions and integrability verdicts for weighted
p-Laplacians on radial and growth-function models."""

from .capacity import (
    CapacityQuery,
    CapacityResult,
    Method,
    dyadic_upper,
    exact_radial,
    integral_estimate,
    interpolation_lower,
    variational_radial,
)
from .classify import (
    State,
    Verdict,
    gradient_in_Lt,
    green_bounded,
    green_in_Ltau,
    is_parabolic,
    singleton_zero,
    tau_monotonicity_check,
)
from .exponents import ExponentReport, analytic_exponents, critical_exponents, empirical_exponents
from .green import (
    GreenProfile,
    NormResult,
    growth_estimate,
    lnorm_gradient,
    lnorm_u,
    pointwise_regime,
    pole_profile_estimate,
    radial_green_gradient,
    radial_green_value,
)
from .measures import (
    AssumptionProfile,
    AsymptoticClass,
    GrowthFunction,
    RadialMeasure,
    builtin_ahlfors,
    builtin_log,
    builtin_power,
    builtin_unweighted,
    induced_growth,
    table_growth,
)

__version__ = "0.1.0"
