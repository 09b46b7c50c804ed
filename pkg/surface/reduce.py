import math
from dataclasses import dataclass

import torch

from errors import ReductionError
from flow import GroupElement

# Integer matrix [[a, b], [c, d]] of SL(2, Z)
type Reducer = tuple[int, int, int, int]

MAX_ITERATIONS = 1_000_000
# Slack on the boundary of the fundamental domain, so that points on the boundary do
# not bounce between the identified sides.
BOUNDARY_TOL = 1e-14

IDENTITY_REDUCER: Reducer = (1, 0, 0, 1)


def compose_reducers(lhs: Reducer, rhs: Reducer) -> Reducer:
    a, b, c, d = lhs
    e, f, g, h = rhs
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def apply_reducer(reducer: Reducer, g: GroupElement) -> GroupElement:
    a, b, c, d = reducer
    return GroupElement(
        a * g.a + b * g.c, a * g.b + b * g.d, c * g.a + d * g.c, c * g.b + d * g.d
    )


@dataclass(frozen=True)
class SurfacePoint:
    """
    A point of M = SL(2, Z) \\ SL(2, R) given by a raw representative together with
    its reduced representative, whose base point lies in the standard fundamental
    domain |Re z| <= 1/2, |z| >= 1, and the integer matrix with reduced = reducer·raw.
    """

    raw: GroupElement
    reduced: GroupElement
    reducer: Reducer

    def base_point(self) -> complex:
        return self.reduced.base_point()

    def reducer_matrix(self) -> GroupElement:
        return GroupElement(*[float(entry) for entry in self.reducer])


def canonical_sign(g: GroupElement, reducer: Reducer) -> tuple[GroupElement, Reducer]:
    """
    -I lies in SL(2, Z), so g and -g are the same point of M. The representative with
    d > 0 (or d = 0 and c > 0) is used.
    """
    if g.d > 0 or (g.d == 0 and g.c > 0):
        return g, reducer
    a, b, c, d = reducer
    return GroupElement(-g.a, -g.b, -g.c, -g.d), (-a, -b, -c, -d)


def reduce(g: GroupElement) -> SurfacePoint:
    """
    Reduce the base point of g into the standard fundamental domain by the classical
    translate-then-invert loop, carrying the frame along by left multiplication.

    Args:
        g (GroupElement): Raw representative.

    Returns:
        point (SurfacePoint): Raw and reduced representatives with the reducer.
    """
    reduced = g
    reducer = IDENTITY_REDUCER
    for _ in range(MAX_ITERATIONS):
        z = reduced.base_point()
        shift = round(z.real)
        if abs(z.real) > 0.5 + BOUNDARY_TOL and shift != 0:
            translation = (1, -shift, 0, 1)
            reduced = apply_reducer(translation, reduced)
            reducer = compose_reducers(translation, reducer)
            z = z - shift
        if abs(z) ** 2 < 1 - BOUNDARY_TOL:
            inversion = (0, -1, 1, 0)
            reduced = apply_reducer(inversion, reduced)
            reducer = compose_reducers(inversion, reducer)
            continue
        reduced, reducer = canonical_sign(reduced, reducer)
        return SurfacePoint(raw=g, reduced=reduced, reducer=reducer)
    raise ReductionError(
        f"Reduction of {g} did not terminate within {MAX_ITERATIONS} iterations"
    )


def reduce_point(z: complex) -> tuple[complex, Reducer]:
    """
    Reduce a point of the upper half-plane into the standard fundamental domain.

    Returns:
        z_reduced (complex): The reduced point γz.
        reducer (Reducer): The matrix γ.
    """
    assert z.imag > 0, f"reduce_point requires Im z > 0, got z={z!r}"
    reducer = IDENTITY_REDUCER
    for _ in range(MAX_ITERATIONS):
        shift = round(z.real)
        if abs(z.real) > 0.5 + BOUNDARY_TOL and shift != 0:
            z = z - shift
            reducer = compose_reducers((1, -shift, 0, 1), reducer)
        if abs(z) ** 2 < 1 - BOUNDARY_TOL:
            z = -1 / z
            reducer = compose_reducers((0, -1, 1, 0), reducer)
            continue
        return z, reducer
    raise ReductionError(
        f"Reduction of z={z!r} did not terminate within {MAX_ITERATIONS} iterations"
    )


def base_points(g: torch.Tensor) -> torch.Tensor:
    """
    Base points g·i = (ac + bd + i) / (c² + d²) of a batch of unimodular matrices
    [..., 2, 2].
    """
    a, b = g[..., 0, 0], g[..., 0, 1]
    c, d = g[..., 1, 0], g[..., 1, 1]
    norm = c * c + d * d
    return torch.complex((a * c + b * d) / norm, 1 / norm)


def reduce_batch(g: torch.Tensor) -> tuple[torch.Tensor, torch.Tensor]:
    """
    Batched version of `reduce` on matrices of size [..., 2, 2].

    Returns:
        reduced (torch.Tensor): Reduced representatives [..., 2, 2] (float64)
        reducers (torch.Tensor): Integer matrices [..., 2, 2] (int64) with
            reduced = reducers @ g.
    """
    assert g.size()[-2:] == (2, 2), (
        f"reduce_batch requires matrices of size [..., 2, 2], got {tuple(g.size())}"
    )
    reduced = g.to(torch.float64).clone()
    reducers = torch.zeros_like(reduced, dtype=torch.int64)
    reducers[..., 0, 0] = 1
    reducers[..., 1, 1] = 1
    active = torch.ones(reduced.size()[:-2], dtype=torch.bool)
    for _ in range(MAX_ITERATIONS):
        z = base_points(reduced)
        shift = torch.round(z.real)
        translate = active & (z.real.abs() > 0.5 + BOUNDARY_TOL) & (shift != 0)
        shift = torch.where(translate, shift, torch.zeros_like(shift))
        # T^{-n} subtracts n times the second row from the first.
        reduced[..., 0, :] -= shift.unsqueeze(-1) * reduced[..., 1, :]
        reducers[..., 0, :] -= shift.to(torch.int64).unsqueeze(-1) * reducers[..., 1, :]
        z = z - shift
        invert = active & (z.abs() ** 2 < 1 - BOUNDARY_TOL)
        if not torch.any(invert):
            break
        # S = [[0, -1], [1, 0]] swaps the rows and negates the new first row.
        mask = invert.unsqueeze(-1)
        first = reduced[..., 0, :].clone()
        reduced[..., 0, :] = torch.where(mask, -reduced[..., 1, :], first)
        reduced[..., 1, :] = torch.where(mask, first, reduced[..., 1, :])
        first_reducer = reducers[..., 0, :].clone()
        reducers[..., 0, :] = torch.where(mask, -reducers[..., 1, :], first_reducer)
        reducers[..., 1, :] = torch.where(mask, first_reducer, reducers[..., 1, :])
        active = invert
    else:
        raise ReductionError(
            f"Batched reduction did not terminate within {MAX_ITERATIONS} iterations"
        )
    c, d = reduced[..., 1, 0], reduced[..., 1, 1]
    flip = ~((d > 0) | ((d == 0) & (c > 0)))
    sign = torch.where(flip, -1, 1).unsqueeze(-1).unsqueeze(-1)
    return reduced * sign, reducers * sign


def reduce_points(z: torch.Tensor) -> tuple[torch.Tensor, torch.Tensor]:
    """
    Batched version of `reduce_point` on a complex tensor of upper half-plane points.

    Returns:
        z_reduced (torch.Tensor): Reduced points (complex128)
        reducers (torch.Tensor): Integer matrices [..., 2, 2] (int64)
    """
    z = z.to(torch.complex128).clone()
    reducers = torch.zeros((*z.size(), 2, 2), dtype=torch.int64)
    reducers[..., 0, 0] = 1
    reducers[..., 1, 1] = 1
    active = torch.ones(z.size(), dtype=torch.bool)
    for _ in range(MAX_ITERATIONS):
        shift = torch.round(z.real)
        translate = active & (z.real.abs() > 0.5 + BOUNDARY_TOL) & (shift != 0)
        shift = torch.where(translate, shift, torch.zeros_like(shift))
        z = z - shift
        reducers[..., 0, :] -= shift.to(torch.int64).unsqueeze(-1) * reducers[..., 1, :]
        invert = active & (z.abs() ** 2 < 1 - BOUNDARY_TOL)
        if not torch.any(invert):
            break
        z = torch.where(invert, -1 / z, z)
        mask = invert.unsqueeze(-1)
        first_reducer = reducers[..., 0, :].clone()
        reducers[..., 0, :] = torch.where(mask, -reducers[..., 1, :], first_reducer)
        reducers[..., 1, :] = torch.where(mask, first_reducer, reducers[..., 1, :])
        active = invert
    else:
        raise ReductionError(
            f"Batched reduction did not terminate within {MAX_ITERATIONS} iterations"
        )
    return z, reducers


def reducer_is_unimodular(reducer: Reducer) -> bool:
    a, b, c, d = reducer
    return all(isinstance(entry, int) for entry in reducer) and a * d - b * c == 1


def is_reduced(z: complex, tol: float = 1e-12) -> bool:
    return abs(z.real) <= 0.5 + tol and abs(z) >= 1 - tol and math.isfinite(z.imag)
