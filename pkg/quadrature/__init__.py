from .gauss import gauss_legendre
from .integrate import (
    MAX_NODES,
    Integrand,
    QuadratureResult,
    integrate,
    periodic_trapezoid,
)

__all__ = [
    "gauss_legendre",
    "MAX_NODES",
    "Integrand",
    "QuadratureResult",
    "integrate",
    "periodic_trapezoid",
]
