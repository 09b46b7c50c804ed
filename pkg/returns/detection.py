import math
from dataclasses import asdict, dataclass

import torch

from errors import InvalidArgument
from flow import GroupElement, horocycle_orbit
from surface import Reducer, SurfacePoint, reduce_batch

from .hashing import (
    candidate_elements,
    frame_coordinates,
    hash_cells,
    near_pairs,
    representatives,
)
from .injectivity import InjectivityGrid, injectivity_search

MAX_CANDIDATES = 10**7
# Accepted distance of g_{t1}^{-1} γ g_{t0} from exp(-z𝒯^{-2/3}V)
RETURN_TOL = 1e-8
# Hash cells span this many return scales 1/c, which covers the V-displacement of a
# return plus the sampling step along the orbit.
RETURN_CELL_FACTOR = 3.0


@dataclass(frozen=True)
class ReturnEvent:
    """
    A (β, 𝒯, T)-return x exp(t1 𝒯U) = x exp(t0 𝒯U) exp(z 𝒯^{-2/3}V) with
    |z| in (e^{-(β+1)}, e^{-β}]/c, realised by the lattice element γ.
    """

    t0: float
    t1: float
    z: float
    beta: int
    degenerate: bool
    gamma: Reducer

    def to_dict(self) -> dict:
        return asdict(self)


def max_beta(scale: float, T: float) -> int:
    """
    Largest shell index, ⌊log(𝒯^{1/3} T)⌋.
    """
    return math.floor(math.log(scale ** (1 / 3) * T))


def shell_index(z: float, c: float) -> int | None:
    """
    β with |z| c in (e^{-(β+1)}, e^{-β}], None if |z| c is not in (0, 1].
    """
    value = abs(z) * c
    if not 0 < value <= 1:
        return None
    return math.floor(-math.log(value))


def return_step(scale: float, c: float) -> float:
    """
    Largest orbit step that resolves all returns, 𝒯^{-1} min(1, 1/(4c)).
    """
    return min(1.0, 1 / (4 * c)) / scale


def check_return_step(scale: float, dt: float, c: float):
    limit = return_step(scale, c)
    if not 0 < dt <= limit * (1 + 1e-12):
        raise InvalidArgument(
            f"Return detection requires 0 < dt <= {limit!r} for scale={scale!r} and "
            f"c={c!r}, got dt={dt!r}"
        )


def orbit_frame(x: GroupElement, t: float, scale: float) -> GroupElement:
    return x @ GroupElement.exp("U", t * scale)


def verify_return(x: GroupElement, event: ReturnEvent, scale: float) -> bool:
    gamma = GroupElement(*[float(entry) for entry in event.gamma])
    d = (
        orbit_frame(x, event.t1, scale).inverse()
        @ gamma
        @ orbit_frame(x, event.t0, scale)
    )
    expected = GroupElement.exp("V", -event.z * scale ** (-2 / 3))
    negated = GroupElement(*[-entry for entry in expected.entries()])
    return d.is_close(expected, tol=RETURN_TOL) or d.is_close(negated, tol=RETURN_TOL)


def solve_returns(
    x: GroupElement,
    gammas: torch.Tensor,
    scale: float,
    T: float,
    c: float,
    dt: float,
) -> list[ReturnEvent]:
    """
    The returns realised by each lattice element, in closed form.

    With M = x^{-1} γ x = [[p, q], [r, s]] and a sign σ, the element
    exp(-t1 𝒯U) σM exp(t0 𝒯U) is lower unipotent exactly when
    t0 = (1 - σs)/(σr𝒯) and t1 = (σp - 1)/(σr𝒯), and then z = -σr 𝒯^{2/3}.
    """
    conjugates = (
        x.inverse().to_tensor() @ gammas.to(torch.float64) @ x.to_tensor()
    )
    p, r, s = conjugates[:, 0, 0], conjugates[:, 1, 0], conjugates[:, 1, 1]
    top = max_beta(scale, T)
    events = []
    for sign in [1.0, -1.0]:
        valid = r != 0
        denominator = torch.where(valid, sign * r * scale, torch.ones_like(r))
        t0 = (1 - sign * s) / denominator
        t1 = (sign * p - 1) / denominator
        z = -sign * r * scale ** (2 / 3)
        inside = valid & (t0.abs() <= 10 * T) & (t1.abs() <= 10 * T)
        for index in torch.nonzero(inside).reshape(-1).tolist():
            beta = shell_index(z[index].item(), c)
            if beta is None or beta > top:
                continue
            start, end = t0[index].item(), t1[index].item()
            event = ReturnEvent(
                t0=start,
                t1=end,
                z=z[index].item(),
                beta=beta,
                degenerate=abs(start - end) < dt,
                gamma=tuple(gammas[index].reshape(-1).tolist()),
            )
            if verify_return(x, event, scale):
                events.append(event)
    return events


def find_beta_returns(
    x: SurfacePoint,
    scale: float,
    T: float,
    dt: float,
    c: float | None = None,
    grid: InjectivityGrid = InjectivityGrid(),
    max_candidates: int = MAX_CANDIDATES,
) -> list[ReturnEvent]:
    """
    All (β, 𝒯, T)-returns of x that are resolvable with the orbit step dt.

    The orbit x exp(t𝒯U), t in [-10T, 10T], is sampled every dt and reduced. Samples
    whose reduced frames fall into the same or adjacent hash cells but lie on different
    sheets give candidate lattice elements, and the returns of each candidate are solved
    exactly and verified.

    Args:
        x (SurfacePoint): Starting point.
        scale (float): The rescaling 𝒯 >= 1.
        T (float): Rescaled length of the orbit, T >= 1.
        dt (float): Orbit step, at most 𝒯^{-1} min(1, 1/(4c)).
        c (float, optional): Estimate of c_Γ(x, 𝒯T), by default from
            `injectivity_search` on the given grid.
        grid (InjectivityGrid): Grid of the injectivity search, if c is not given.
        max_candidates (int): Cap on the candidate pairs of the spatial hash.

    Returns:
        events (list[ReturnEvent]): The returns sorted by (β, t0, t1, z).
    """
    if not scale >= 1:
        raise InvalidArgument(f"Return detection requires scale >= 1, got {scale!r}")
    if not T >= 1:
        raise InvalidArgument(f"Return detection requires T >= 1, got T={T!r}")
    if c is None:
        c = injectivity_search(x, scale * T, grid)
    if not c >= 1:
        raise InvalidArgument(f"Return detection requires c >= 1, got c={c!r}")
    check_return_step(scale, dt, c)
    # The grid is anchored at -10T, so halving dt keeps all previous samples.
    num_samples = math.floor(20 * T / dt + 1e-9) + 1
    times = -10 * T + dt * torch.arange(num_samples, dtype=torch.float64)
    reduced, reducers = reduce_batch(horocycle_orbit(x.reduced, times * scale))
    cells = hash_cells(frame_coordinates(reduced), RETURN_CELL_FACTOR / c)
    reps = representatives(cells, reducers)
    i, j = near_pairs(cells[reps], max_candidates=max_candidates)
    gammas = candidate_elements(reducers[reps], i, j)
    if gammas.size(0) == 0:
        return []
    events = solve_returns(x.reduced, gammas, scale=scale, T=T, c=c, dt=dt)
    return sorted(events, key=lambda e: (e.beta, e.t0, e.t1, e.z))
