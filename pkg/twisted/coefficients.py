import math

import torch

from cusp import CuspFormSpec, evaluate_form_batch
from errors import InvalidArgument
from quadrature import QuadratureResult, periodic_trapezoid

from .integrals import QuadratureSpec

# Initial nodes of the closed horocycle rule per unit of period
NODES_PER_PERIOD = 16
MIN_NODES = 64


def closed_horocycle_integral(
    n: int,
    s: float = 0.0,
    spec: CuspFormSpec = CuspFormSpec(),
    quad: QuadratureSpec = QuadratureSpec(),
) -> QuadratureResult:
    """
    ∫_0^n f((i + s + t)/n) e^{-2πit} dt along the closed horocycle of period n at
    height 1/n, started s units along it.

    The form is evaluated directly on the upper half-plane (reduced internally by
    `evaluate_form_batch`). The integrand is smooth and n-periodic, so the
    rectangle rule converges geometrically.
    """
    if n < 1:
        raise InvalidArgument(f"Closed horocycle index must be >= 1, got n={n}")

    def integrand(t: torch.Tensor) -> torch.Tensor:
        z = torch.complex(t + s, torch.ones_like(t)) / n
        return evaluate_form_batch(spec, z) * torch.exp(-2j * math.pi * t)

    return periodic_trapezoid(
        integrand,
        float(n),
        n=max(MIN_NODES, NODES_PER_PERIOD * n),
        tol=quad.tol,
    )


def cusp_coefficient(
    n: int,
    spec: CuspFormSpec = CuspFormSpec(),
    quad: QuadratureSpec = QuadratureSpec(),
) -> complex:
    """
    The n-th Fourier coefficient of the form from a twisted integral along a
    closed horocycle:

        a_n = e^{2π} n^{-1} ∫_0^n f((i + t)/n) e^{-2πit} dt

    For Δ this is τ(n).
    """
    result = closed_horocycle_integral(n, 0.0, spec, quad)
    return math.exp(2 * math.pi) / n * complex(result.value)


def closed_horocycle_shift_check(
    n: int,
    s: float,
    spec: CuspFormSpec = CuspFormSpec(),
    quad: QuadratureSpec = QuadratureSpec(),
) -> float:
    """
    Relative change | |I(x)| - |I(h_s x)| | / |I(x)| of the modulus of the closed
    horocycle integral when its starting point is moved along the horocycle.
    Moving by s multiplies it by the phase e^{2πis}, so the modulus is unchanged.
    """
    base = abs(closed_horocycle_integral(n, 0.0, spec, quad).value)
    if s == 0:
        return 0.0
    moved = abs(closed_horocycle_integral(n, s, spec, quad).value)
    return abs(base - moved) / base
