import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

import torch

from errors import InvalidArgument
from surface import SurfacePoint

from .detection import ReturnEvent
from .injectivity import InjectivityGrid, injectivity_search

# Number of segments whose pieces are resolved at once.
SEGMENT_CHUNK = 1 << 16


@dataclass
class WidthProfile:
    """
    The tube around the orbit segment [0, T] and its average inverse width
    (1/T) ∫₀ᵀ w_Ω(t)^{-1} dt, where w_Ω(t) = side(t)² is the area of the square
    cross-section.
    """

    scale: float
    T: float
    c: float
    integral: float
    events: list[ReturnEvent] = field(default_factory=list)

    @property
    def baseline(self) -> float:
        """
        Value of the integral without any pinch, (100c)².
        """
        return (100 * self.c) ** 2

    @property
    def normalised(self) -> float:
        """
        The integral divided by c² T (1 + log(𝒯^{1/3} T)), which stays bounded.
        """
        growth = 1 + math.log(self.scale ** (1 / 3) * self.T)
        return self.integral / (self.c**2 * self.T * growth)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["baseline"] = self.baseline
        out["normalised"] = self.normalised
        return out


def pinch_parameters(
    events: Sequence[ReturnEvent], scale: float, c: float
) -> tuple[torch.Tensor, torch.Tensor, torch.Tensor, float]:
    """
    The pinch of an event at t0 has side A max(|t - t0|, h) with the slope
    A = 𝒯^{2/3} e^{-β} / (100c) and the floor h = 𝒯^{-2/3}. It meets the baseline
    side 1/(100c) at |t - t0| = e^β 𝒯^{-2/3}.

    Returns:
        centres (torch.Tensor): Times t0 of the pinches [num_events]
        slopes (torch.Tensor): Slopes A of the pinches [num_events]
        windows (torch.Tensor): Half widths e^β 𝒯^{-2/3} of the pinches [num_events]
        floor (float): The floor h.
    """
    centres = torch.tensor([e.t0 for e in events], dtype=torch.float64)
    betas = torch.tensor([e.beta for e in events], dtype=torch.float64)
    slopes = scale ** (2 / 3) * torch.exp(-betas) / (100 * c)
    windows = torch.exp(betas) * scale ** (-2 / 3)
    return centres, slopes, windows, scale ** (-2 / 3)


def pinch_sides(
    t: torch.Tensor, centres: torch.Tensor, slopes: torch.Tensor, floor: float
) -> torch.Tensor:
    """
    Sides of all pinches at the times t.

    Returns:
        sides (torch.Tensor): Sides of size [num_times, num_events]
    """
    distance = (t.unsqueeze(-1) - centres).abs()
    return slopes * torch.clamp(distance, min=floor)


def tube_side(
    t: torch.Tensor, events: Sequence[ReturnEvent], scale: float, c: float
) -> torch.Tensor:
    """
    Side of the square cross-section of the tube at the times t, the baseline
    1/(100c) intersected pointwise with the pinches of all events.
    """
    t = torch.as_tensor(t, dtype=torch.float64)
    baseline = torch.full_like(t, 1 / (100 * c))
    if len(events) == 0:
        return baseline
    centres, slopes, _, floor = pinch_parameters(events, scale, c)
    sides = pinch_sides(t.reshape(-1), centres, slopes, floor).amin(dim=-1)
    return torch.minimum(baseline, sides.reshape(t.size()))


def breakpoints(
    centres: torch.Tensor,
    slopes: torch.Tensor,
    windows: torch.Tensor,
    floor: float,
    T: float,
) -> torch.Tensor:
    """
    All times in [0, T] where the tube side can change its piece: the kinks of every
    pinch and the crossings of pinches with overlapping windows.
    """
    points = [
        torch.tensor([0.0, T], dtype=torch.float64),
        centres,
        centres - floor,
        centres + floor,
        centres - windows,
        centres + windows,
    ]
    i, j = torch.triu_indices(centres.size(0), centres.size(0), offset=1)
    overlap = (centres[i] - centres[j]).abs() <= windows[i] + windows[j]
    i, j = i[overlap], j[overlap]
    if i.size(0) > 0:
        ti, tj, ai, aj = centres[i], centres[j], slopes[i], slopes[j]
        # Opposite slopes cross between the centres.
        points.append((ai * ti + aj * tj) / (ai + aj))
        # Equal slopes on the same side only cross for different A.
        different = ai != aj
        points.append(
            (ai * ti - aj * tj)[different] / (ai - aj)[different],
        )
        # The flat floor of one pinch against the slope of the other.
        points.extend(
            [
                tj + ai * floor / aj,
                tj - ai * floor / aj,
                ti + aj * floor / ai,
                ti - aj * floor / ai,
            ]
        )
    times = torch.cat(points)
    times = times[(times >= 0) & (times <= T)]
    return torch.unique(times)


def width_integral(
    x: SurfacePoint,
    scale: float,
    T: float,
    events: Sequence[ReturnEvent],
    c: float | None = None,
    grid: InjectivityGrid = InjectivityGrid(),
) -> WidthProfile:
    """
    Average inverse width of the tube built from the returns of x, in closed form.

    Between consecutive breakpoints the side is either constant or one linear branch
    A|t - t0| of a single pinch, so every segment [a, b] contributes (b - a)/k² or
    |1/(a - t0) - 1/(b - t0)| / A².

    Args:
        x (SurfacePoint): Starting point of the orbit.
        scale (float): The rescaling 𝒯 >= 1.
        T (float): Length of the averaged segment, T > 0.
        events (Sequence[ReturnEvent]): Returns of x for (𝒯, T), usually from
            `find_beta_returns`.
        c (float, optional): The c_Γ(x, 𝒯T) estimate the events were detected with,
            by default from `injectivity_search` on the given grid.
        grid (InjectivityGrid): Grid of the injectivity search, if c is not given.

    Returns:
        profile (WidthProfile): The integral with the events that were used.
    """
    if not scale >= 1:
        raise InvalidArgument(f"width_integral requires scale >= 1, got {scale!r}")
    if not (math.isfinite(T) and T > 0):
        raise InvalidArgument(f"width_integral requires T > 0, got T={T!r}")
    if c is None:
        c = injectivity_search(x, scale * T, grid)
    if not c >= 1:
        raise InvalidArgument(f"width_integral requires c >= 1, got c={c!r}")
    base = 1 / (100 * c)
    events = list(events)
    if len(events) == 0:
        return WidthProfile(scale=scale, T=T, c=c, integral=base**-2, events=events)
    centres, slopes, windows, floor = pinch_parameters(events, scale, c)
    times = breakpoints(centres, slopes, windows, floor, T)
    starts, ends = times[:-1], times[1:]
    total = torch.zeros((), dtype=torch.float64)
    for begin in range(0, starts.size(0), SEGMENT_CHUNK):
        a = starts[begin : begin + SEGMENT_CHUNK]
        b = ends[begin : begin + SEGMENT_CHUNK]
        mid = (a + b) / 2
        sides = pinch_sides(mid, centres, slopes, floor)
        side, index = sides.min(dim=-1)
        pinched = side < base
        distance = (mid - centres[index]).abs()
        linear = pinched & (distance > floor)
        constant = torch.where(pinched, side, torch.full_like(side, base))
        centre, slope = centres[index], slopes[index]
        linear_part = (1 / (a - centre) - 1 / (b - centre)).abs() / slope**2
        parts = torch.where(linear, linear_part, (b - a) / constant**2)
        total = total + parts.sum()
    return WidthProfile(
        scale=scale, T=T, c=c, integral=total.item() / T, events=events
    )
