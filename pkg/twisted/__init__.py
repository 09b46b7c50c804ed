from .coefficients import (
    closed_horocycle_integral,
    closed_horocycle_shift_check,
    cusp_coefficient,
)
from .fit import ExponentFit, exponent_fit
from .integrals import (
    QuadratureSpec,
    TwistedIntegral,
    additivity_check,
    ergodic_integral,
    rescaled_integral_check,
    small_lambda_identity_check,
    twisted_orbit_integral,
)

__all__ = [
    "closed_horocycle_integral",
    "closed_horocycle_shift_check",
    "cusp_coefficient",
    "ExponentFit",
    "exponent_fit",
    "QuadratureSpec",
    "TwistedIntegral",
    "additivity_check",
    "ergodic_integral",
    "rescaled_integral_check",
    "small_lambda_identity_check",
    "twisted_orbit_integral",
]
