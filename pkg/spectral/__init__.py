from .function import (
    SERIES_KINDS,
    SeriesKind,
    SobolevIndex,
    SpectralFunction,
    TwistParams,
)
from .norms import (
    discrete_norm,
    flow_coeqn_ratio,
    foliated_norm,
    l2nu_norm,
    lebesgue_norm,
    norm,
)
from .operators import (
    apply_hatU,
    apply_hatV,
    apply_hatX,
    central_multiplier,
    eval_invariant_distribution,
    green_operator,
    map_invariant_distributions,
    operator_A,
    operator_A_inverse,
    solve_flow_coeqn,
    solve_map_coeqn,
    twist_interval,
    u_tau,
    u_tau_bounds,
)
from .profiles import (
    BumpProfile,
    DilatedProfile,
    ExpMinusOneProfile,
    GaussianProfile,
    PolynomialProfile,
    PowerProfile,
    ProductProfile,
    Profile,
    QuotientProfile,
    ScaledProfile,
    SumProfile,
)

__all__ = [
    "SERIES_KINDS",
    "SeriesKind",
    "SobolevIndex",
    "SpectralFunction",
    "TwistParams",
    "discrete_norm",
    "flow_coeqn_ratio",
    "foliated_norm",
    "l2nu_norm",
    "lebesgue_norm",
    "norm",
    "apply_hatU",
    "apply_hatV",
    "apply_hatX",
    "central_multiplier",
    "eval_invariant_distribution",
    "green_operator",
    "map_invariant_distributions",
    "operator_A",
    "operator_A_inverse",
    "solve_flow_coeqn",
    "solve_map_coeqn",
    "twist_interval",
    "u_tau",
    "u_tau_bounds",
    "BumpProfile",
    "DilatedProfile",
    "ExpMinusOneProfile",
    "GaussianProfile",
    "PolynomialProfile",
    "PowerProfile",
    "ProductProfile",
    "Profile",
    "QuotientProfile",
    "ScaledProfile",
    "SumProfile",
]
