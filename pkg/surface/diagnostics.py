import math
from dataclasses import dataclass

import torch

from errors import InvalidArgument
from flow import geodesic, geodesic_orbit

from .reduce import SurfacePoint, base_points, reduce, reduce_batch

# Geodesic orbits are walked in chunks of about this many time units, re-reducing the
# starting frame of every chunk, since a_t grows the matrix entries like e^{t/2}.
CHUNK_TIME = 16.0


def height_distance(x: SurfacePoint) -> float:
    """
    Cusp distance d_M(x) = max(0, log Im z) of the reduced base point z.

    This log-height stands in for the distance to a fixed base point, which agrees
    with it up to an additive constant.
    """
    return max(0.0, math.log(x.base_point().imag))


def height_distance_batch(reduced: torch.Tensor) -> torch.Tensor:
    """
    d_M for a batch of reduced matrices [..., 2, 2].
    """
    return torch.clamp(torch.log(base_points(reduced).imag), min=0.0)


def geodesic_heights(
    x: SurfacePoint, t_max: float, step: float
) -> tuple[torch.Tensor, torch.Tensor]:
    """
    The sampled profile t -> d_M(a_t(x)) for t in {0, step, ..., t_max}.

    Returns:
        times (torch.Tensor): Sample times [num_samples]
        heights (torch.Tensor): d_M(a_t(x)) at the sample times [num_samples]
    """
    if not step > 0:
        raise InvalidArgument(f"Sampling step must be positive, got step={step!r}")
    if not t_max >= 0:
        raise InvalidArgument(f"t_max must be non-negative, got t_max={t_max!r}")
    num_samples = math.floor(t_max / step + 1e-9) + 1
    chunk_steps = max(1, round(CHUNK_TIME / step))
    start = x.reduced
    heights = []
    for chunk_start in range(0, num_samples, chunk_steps):
        chunk_size = min(chunk_steps, num_samples - chunk_start)
        local_times = torch.arange(chunk_size, dtype=torch.float64) * step
        reduced, _ = reduce_batch(geodesic_orbit(start, local_times))
        heights.append(height_distance_batch(reduced))
        start = reduce(geodesic(start, chunk_steps * step)).reduced
    times = torch.arange(num_samples, dtype=torch.float64) * step
    return times, torch.cat(heights)


@dataclass(frozen=True)
class DiophantineClass:
    """
    Points whose geodesic cusp excursions satisfy d_M(a_t(x)) <= A t + Q for t > 0.
    """

    A: float
    Q: float

    def __post_init__(self):
        if not 0 <= self.A < 1:
            raise InvalidArgument(f"DiophantineClass requires 0 <= A < 1, got {self.A}")
        # Q = 0 is accepted, it is the degenerate class of points that never leave the
        # compact part.
        if not self.Q >= 0:
            raise InvalidArgument(f"DiophantineClass requires Q >= 0, got {self.Q}")


@dataclass
class DiophantineReport:
    passed: bool
    # Largest d_M(a_t(x)) - (A t + Q) over the samples, clamped at 0
    max_excess: float
    # Time at which the largest excess occurs
    t_worst: float

    def to_dict(self) -> dict:
        return dict(
            passed=self.passed, max_excess=self.max_excess, t_worst=self.t_worst
        )


def diophantine_check(
    x: SurfacePoint, cls: DiophantineClass, t_max: float, step: float = 0.05
) -> DiophantineReport:
    if not t_max > 0:
        raise InvalidArgument(f"t_max must be positive, got t_max={t_max!r}")
    times, heights = geodesic_heights(x, t_max=t_max, step=step)
    excess = heights - (cls.A * times + cls.Q)
    worst = int(torch.argmax(excess).item())
    max_excess = max(0.0, excess[worst].item())
    return DiophantineReport(
        passed=max_excess == 0.0, max_excess=max_excess, t_worst=times[worst].item()
    )


def loglaw_statistic(x: SurfacePoint, T: float, step: float = 0.05) -> float:
    """
    max_{step <= t <= T} d_M(a_t(x)) / log T, which concentrates near 1/2 for almost
    every x as T grows.
    """
    if not T >= math.e:
        raise InvalidArgument(f"loglaw_statistic requires T >= e, got T={T!r}")
    _, heights = geodesic_heights(x, t_max=T, step=step)
    return heights[1:].max().item() / math.log(T)
