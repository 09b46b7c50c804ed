import math
from typing import Callable, Literal

import torch

from errors import InvalidArgument

from .element import GroupElement

type FlowKind = Literal["geodesic", "horocycle", "unstable-horocycle"]


def check_time(t: float, name: str = "t"):
    if not math.isfinite(t):
        raise InvalidArgument(f"Flow time must be finite, got `{name}={t!r}`")


def geodesic(x: GroupElement, t: float) -> GroupElement:
    """
    Geodesic flow a_t(x) = x exp(tX/2).

    Note: This is the half exponent convention, i.e. a_t(x) = x diag(e^{t/2}, e^{-t/2})
    and not x exp(tX). Conjugating with it rescales horocycle time by e^t.
    """
    check_time(t)
    return x @ GroupElement.exp("X", t / 2)


def horocycle(x: GroupElement, t: float) -> GroupElement:
    check_time(t)
    return x @ GroupElement.exp("U", t)


def unstable_horocycle(x: GroupElement, t: float) -> GroupElement:
    check_time(t)
    return x @ GroupElement.exp("V", t)


def alpha_map(
    x: GroupElement, scale: float, t: float, y: float, z: float
) -> GroupElement:
    """
    Rescaled box coordinates around the orbit of x:
    x exp(t𝒯U) exp(y𝒯^{-1/3}X) exp(z𝒯^{-2/3}V).

    Args:
        x (GroupElement): Base of the box.
        scale (float): The rescaling 𝒯, must be at least 1.
        t (float): Coordinate along the horocycle.
        y (float): Coordinate along the geodesic direction.
        z (float): Coordinate along the unstable horocycle.

    Returns:
        g (GroupElement): The point with the given box coordinates.
    """
    if not scale >= 1:
        raise InvalidArgument(f"alpha_map requires `scale >= 1`, got scale={scale!r}")
    for name, value in [("t", t), ("y", y), ("z", z)]:
        check_time(value, name=name)
    return (
        x
        @ GroupElement.exp("U", t * scale)
        @ GroupElement.exp("X", y * scale ** (-1 / 3))
        @ GroupElement.exp("V", z * scale ** (-2 / 3))
    )


FLOWS: dict[FlowKind, Callable[[GroupElement, float], GroupElement]] = {
    "geodesic": geodesic,
    "horocycle": horocycle,
    "unstable-horocycle": unstable_horocycle,
}


def orbit_walk(
    x: GroupElement,
    kind: FlowKind,
    step: float,
    num_steps: int,
    renormalise_every: int = 1000,
) -> GroupElement:
    """
    Follow a flow by composing many small steps, one at a time, rather than jumping
    with the closed form. The determinant drifts through rounding, so the element is
    renormalised every `renormalise_every` compositions.
    """
    flow = FLOWS.get(kind)
    if flow is None:
        options = " | ".join([repr(k) for k in FLOWS])
        raise ValueError(f"No flow for `kind={kind!r}`, must be one of: {options}")
    check_time(step, name="step")
    for i in range(1, num_steps + 1):
        x = flow(x, step)
        if i % renormalise_every == 0:
            x = x.normalise()
    return x.normalise()


def horocycle_orbit(x: GroupElement, times: torch.Tensor) -> torch.Tensor:
    """
    Points x exp(tU) for a batch of times, as matrices of size [len(times), 2, 2].
    """
    times = times.to(torch.float64)
    a, b, c, d = x.entries()
    out = torch.empty((*times.size(), 2, 2), dtype=torch.float64)
    out[..., 0, 0] = a
    out[..., 0, 1] = a * times + b
    out[..., 1, 0] = c
    out[..., 1, 1] = c * times + d
    return out


def geodesic_orbit(x: GroupElement, times: torch.Tensor) -> torch.Tensor:
    """
    Points a_t(x) = x exp(tX/2) for a batch of times, as matrices [len(times), 2, 2].
    """
    times = times.to(torch.float64)
    a, b, c, d = x.entries()
    grow = torch.exp(times / 2)
    shrink = torch.exp(-times / 2)
    out = torch.empty((*times.size(), 2, 2), dtype=torch.float64)
    out[..., 0, 0] = a * grow
    out[..., 0, 1] = b * shrink
    out[..., 1, 0] = c * grow
    out[..., 1, 1] = d * shrink
    return out


def alpha_batch(
    x: GroupElement,
    t: torch.Tensor,
    y: torch.Tensor,
    z: torch.Tensor,
    scale: float = 1.0,
) -> torch.Tensor:
    """
    Batched `alpha_map` for broadcastable tensors of box coordinates.

    exp(tU) exp(yX) exp(zV) = [[e^y + t z e^{-y}, t e^{-y}], [z e^{-y}, e^{-y}]], which
    is multiplied onto x from the right.

    Returns:
        g (torch.Tensor): Matrices of size [*broadcast(t, y, z).size(), 2, 2]
    """
    if not scale >= 1:
        raise InvalidArgument(f"alpha_batch requires `scale >= 1`, got scale={scale!r}")
    t, y, z = torch.broadcast_tensors(
        t.to(torch.float64) * scale,
        y.to(torch.float64) * scale ** (-1 / 3),
        z.to(torch.float64) * scale ** (-2 / 3),
    )
    grow, shrink = torch.exp(y), torch.exp(-y)
    box = torch.empty((*t.size(), 2, 2), dtype=torch.float64)
    box[..., 0, 0] = grow + t * z * shrink
    box[..., 0, 1] = t * shrink
    box[..., 1, 0] = z * shrink
    box[..., 1, 1] = shrink
    return x.to_tensor() @ box
