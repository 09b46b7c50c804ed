import math
from dataclasses import dataclass
from typing import Callable, Sequence

import torch

from errors import InvalidArgument

from .gauss import gauss_legendre

type Integrand = Callable[[torch.Tensor], torch.Tensor]

PANEL_ORDER = 16
MAX_NODES = 2**20
# Geometric grading towards singular endpoints: panel widths shrink by this ratio
# for GRADING_LEVELS levels.
GRADING_RATIO = 0.15
GRADING_LEVELS = 60
# Convergence floor relative to the integral of |f|, for integrals that vanish.
ABS_FLOOR = 1e-14


@dataclass
class QuadratureResult:
    value: complex | float
    # Difference between the last two refinement levels
    err_est: float
    nodes: int
    converged: bool

    def __add__(self, other: "QuadratureResult") -> "QuadratureResult":
        return QuadratureResult(
            value=self.value + other.value,
            err_est=self.err_est + other.err_est,
            nodes=self.nodes + other.nodes,
            converged=self.converged and other.converged,
        )

    def scale(self, factor: complex | float) -> "QuadratureResult":
        return QuadratureResult(
            value=self.value * factor,
            err_est=self.err_est * abs(factor),
            nodes=self.nodes,
            converged=self.converged,
        )


def to_scalar(value: torch.Tensor) -> complex | float:
    return complex(value.item()) if value.is_complex() else float(value.item())


def graded_edges(start: float, end: float, towards_start: bool) -> list[float]:
    length = end - start
    offsets = [length * GRADING_RATIO**k for k in range(GRADING_LEVELS, 0, -1)]
    if towards_start:
        return [start] + [start + offset for offset in offsets] + [end]
    return [start] + [end - offset for offset in reversed(offsets)] + [end]


def base_panels(
    a: float,
    b: float,
    panels: int,
    breakpoints: Sequence[float],
    singular_points: Sequence[float],
) -> torch.Tensor:
    """
    Edges of the coarsest panels: [a, b] split at the breakpoints (and singular
    points) into segments, each cut into `panels` equal pieces, with the pieces
    touching a singular point graded geometrically towards it.
    """
    cuts = sorted({a, b, *[p for p in [*breakpoints, *singular_points] if a < p < b]})
    edges = [a]
    for start, end in zip(cuts[:-1], cuts[1:]):
        num_panels = panels
        if start in singular_points and end in singular_points:
            num_panels = max(panels, 2)
        segment = torch.linspace(start, end, num_panels + 1, dtype=torch.float64)
        segment = segment.tolist()
        for i, (left, right) in enumerate(zip(segment[:-1], segment[1:])):
            if i == 0 and start in singular_points:
                edges.extend(graded_edges(left, right, towards_start=True)[1:])
            elif i == num_panels - 1 and end in singular_points:
                edges.extend(graded_edges(left, right, towards_start=False)[1:])
            else:
                edges.append(right)
    return torch.tensor(edges, dtype=torch.float64)


def panel_rule(edges: torch.Tensor) -> tuple[torch.Tensor, torch.Tensor]:
    """
    Nodes and weights of the composite 16-point Gauss-Legendre rule over the panels.
    """
    x, w = gauss_legendre(PANEL_ORDER)
    left, right = edges[:-1], edges[1:]
    half = (right - left).unsqueeze(-1) / 2
    mid = (right + left).unsqueeze(-1) / 2
    nodes = mid + half * x
    weights = half * w
    return nodes.flatten(), weights.flatten()


def refine(edges: torch.Tensor) -> torch.Tensor:
    mids = (edges[:-1] + edges[1:]) / 2
    out = torch.empty(2 * edges.size(0) - 1, dtype=torch.float64)
    out[0::2] = edges
    out[1::2] = mids
    return out


def integrate(
    fn: Integrand,
    a: float,
    b: float,
    tol: float = 1e-9,
    max_nodes: int = MAX_NODES,
    panels: int = 1,
    breakpoints: Sequence[float] = (),
    singular_points: Sequence[float] = (),
) -> QuadratureResult:
    """
    Composite 16-point Gauss-Legendre quadrature of a vectorised integrand, doubling
    the number of panels until successive estimates differ by less than `tol`
    relative to the value.

    Args:
        fn (Callable): Integrand, maps a float64 tensor of nodes to values of the
            same size (real or complex).
        a (float): Lower limit.
        b (float): Upper limit.
        tol (float): Relative tolerance [Default: 1e-9]
        max_nodes (int): Cap on the number of nodes, after which the result is
            flagged as not converged. [Default: 2^20]
        panels (int): Initial number of equal panels per segment [Default: 1]
        breakpoints (Sequence[float]): Points where the integrand is not smooth.
        singular_points (Sequence[float]): Points (inside or at the ends of the
            interval) with integrable singularities, such as |ξ|^{-ν} at 0, towards
            which the panels are graded geometrically.

    Returns:
        result (QuadratureResult): The value with the difference of the last two
            refinement levels as error estimate.
    """
    if not (math.isfinite(a) and math.isfinite(b)):
        raise InvalidArgument(f"Integration limits must be finite, got [{a}, {b}]")
    if a > b:
        raise InvalidArgument(f"Integration limits must satisfy a <= b, got [{a}, {b}]")
    if a == b:
        return QuadratureResult(value=0.0, err_est=0.0, nodes=0, converged=True)
    edges = base_panels(a, b, panels, breakpoints, singular_points)
    previous = None
    while True:
        nodes, weights = panel_rule(edges)
        values = fn(nodes)
        value = torch.sum(weights * values)
        l1 = torch.sum(weights * values.abs()).item()
        num_nodes = nodes.size(0)
        if previous is not None:
            err = (value - previous).abs().item()
            threshold = tol * abs(value.item()) + ABS_FLOOR * l1
            if err <= threshold:
                return QuadratureResult(to_scalar(value), err, num_nodes, True)
            if 2 * num_nodes > max_nodes:
                return QuadratureResult(to_scalar(value), err, num_nodes, False)
        previous = value
        edges = refine(edges)


def periodic_trapezoid(
    fn: Integrand,
    period: float,
    n: int = 64,
    start: float = 0.0,
    tol: float = 1e-12,
    max_nodes: int = MAX_NODES,
) -> QuadratureResult:
    """
    Rectangle rule over one period of a smooth periodic integrand, doubling the
    number of equispaced nodes until successive estimates agree. It converges
    geometrically for analytic periodic integrands.
    """
    if not period > 0:
        raise InvalidArgument(f"Period must be positive, got period={period!r}")
    step = period / n
    values = fn(start + step * torch.arange(n, dtype=torch.float64))
    value = step * torch.sum(values)
    l1 = (step * torch.sum(values.abs())).item()
    while True:
        # Halving the step only adds the midpoints.
        midpoints = start + step * (torch.arange(n, dtype=torch.float64) + 0.5)
        mid_values = fn(midpoints)
        l1 = max(l1, (step * torch.sum(mid_values.abs())).item())
        refined = value / 2 + step / 2 * torch.sum(mid_values)
        err = (refined - value).abs().item()
        n *= 2
        step /= 2
        value = refined
        if err <= tol * abs(value.item()) + ABS_FLOOR * l1:
            return QuadratureResult(to_scalar(value), err, n, True)
        if 2 * n > max_nodes:
            return QuadratureResult(to_scalar(value), err, n, False)
