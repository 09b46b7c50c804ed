from dataclasses import dataclass
from typing import Literal

import torch

from errors import InvalidArgument
from flow import GroupElement
from surface import SurfacePoint, reduce, reduce_batch, reduce_point, reduce_points
from surface.reduce import base_points

from .eta import DEFAULT_TRUNCATION, check_upper_half_plane, eta, eta_batch

type CuspFormKind = Literal["delta"]

# Weight of each supported eta quotient, the exponent of η is 2 * weight.
FORM_WEIGHTS: dict[CuspFormKind, int] = {"delta": 12}


@dataclass(frozen=True)
class CuspFormSpec:
    """
    A holomorphic cusp form given as a power of the eta function. Only Δ = η^24 of
    weight 12 and level 1 is available.
    """

    form: CuspFormKind = "delta"
    weight: int = 12
    trunc: int = DEFAULT_TRUNCATION

    def __post_init__(self):
        expected_weight = FORM_WEIGHTS.get(self.form)
        if expected_weight is None:
            options = " | ".join([repr(f) for f in FORM_WEIGHTS])
            raise InvalidArgument(
                f"No cusp form for `form={self.form!r}`, must be one of: {options}"
            )
        if self.weight <= 0 or self.weight % 2 != 0:
            raise InvalidArgument(
                f"Weight must be an even positive integer, got weight={self.weight}"
            )
        if self.weight != expected_weight:
            raise InvalidArgument(
                f"Form {self.form!r} has weight {expected_weight}, got {self.weight}"
            )
        if self.trunc < 1:
            raise InvalidArgument(f"Truncation must be positive, got {self.trunc}")

    @property
    def eta_power(self) -> int:
        return 24 * self.weight // 12


def evaluate_form(spec: CuspFormSpec, z: complex) -> complex:
    """
    Evaluate the form at an arbitrary point of the upper half-plane, by reducing z to
    z_red = γz with γ = [[a, b], [c, d]] and using f(z) = (cz + d)^{-k} f(z_red).

    On the reduced domain |q| <= e^{-π√3}, so the truncated product is accurate.
    """
    check_upper_half_plane(z)
    z_reduced, (_, _, c, d) = reduce_point(z)
    return (c * z + d) ** (-spec.weight) * eta(z_reduced, spec.trunc) ** spec.eta_power


def evaluate_form_batch(spec: CuspFormSpec, z: torch.Tensor) -> torch.Tensor:
    z = z.to(torch.complex128)
    if not torch.all(z.imag > 0):
        raise InvalidArgument(
            f"Expected points with Im z > 0, got min Im z = {z.imag.min().item()}"
        )
    z_reduced, reducers = reduce_points(z)
    c = reducers[..., 1, 0].to(torch.float64)
    d = reducers[..., 1, 1].to(torch.float64)
    factor = (c * z + d) ** (-spec.weight)
    return factor * eta_batch(z_reduced, spec.trunc) ** spec.eta_power


def lift_reduced(spec: CuspFormSpec, g: GroupElement) -> complex:
    """
    f(g·i) (ci + d)^{-k} for a frame whose base point is already reduced.
    """
    automorphy = complex(g.d, g.c) ** (-spec.weight)
    return eta(g.base_point(), spec.trunc) ** spec.eta_power * automorphy


def lift(spec: CuspFormSpec, g: GroupElement) -> complex:
    """
    Lift of the cusp form to a function on M, f(g·i) (ci + d)^{-k} for
    g = [[a, b], [c, d]]. It is left SL(2, Z)-invariant, so it is evaluated on the
    reduced representative, which keeps the eta product short and accurate.
    """
    return lift_reduced(spec, reduce(g).reduced)


def lift_point(spec: CuspFormSpec, x: SurfacePoint) -> complex:
    return lift_reduced(spec, x.reduced)


def lift_batch(spec: CuspFormSpec, g: torch.Tensor) -> torch.Tensor:
    """
    Batched lift on frames of size [..., 2, 2], returned as complex128 [...].
    """
    reduced, _ = reduce_batch(g)
    return lift_batch_reduced(spec, reduced)


def lift_batch_reduced(spec: CuspFormSpec, reduced: torch.Tensor) -> torch.Tensor:
    c, d = reduced[..., 1, 0], reduced[..., 1, 1]
    automorphy = torch.complex(d, c) ** (-spec.weight)
    return eta_batch(base_points(reduced), spec.trunc) ** spec.eta_power * automorphy
