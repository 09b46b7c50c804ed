import math
from dataclasses import asdict, dataclass
from typing import Callable

import torch

from cusp import Observable
from errors import InvalidArgument, PrecisionLimit
from flow import horocycle_orbit
from surface import SurfacePoint
from twisted import QuadratureSpec, ergodic_integral

from .blocks import check_parameters, progression_times, venkatesh_blocks

# Beyond this orbit time a double no longer resolves the orbit to well below 1.
MAX_ORBIT_TIME = 1e12
# Terms reduced at once, the partial sums are then added in chunk order.
SUM_CHUNK = 1 << 16


def check_orbit_time(t_max: float):
    if t_max > MAX_ORBIT_TIME:
        raise PrecisionLimit(
            f"Orbit time {t_max:g} exceeds the double precision cap of "
            f"{MAX_ORBIT_TIME:g}"
        )


def chunked_sum(
    fn: Callable[[torch.Tensor], torch.Tensor], count: int, chunk: int = SUM_CHUNK
) -> float:
    """
    Σ_{i < count} fn(i), evaluated on consecutive chunks of the positions i. Each chunk
    is summed by itself and the partial sums are added in chunk order, so the result
    does not depend on how the work is split.
    """
    partials = [
        fn(torch.arange(start, min(start + chunk, count))).sum()
        for start in range(0, count, chunk)
    ]
    if len(partials) == 0:
        return 0.0
    return torch.stack(partials).sum().item()


def orbit_values(obs: Observable, x: SurfacePoint, times: torch.Tensor) -> torch.Tensor:
    return obs(horocycle_orbit(x.reduced, times))


def sparse_times(indices: torch.Tensor, delta: float) -> torch.Tensor:
    return indices.to(torch.float64) ** (1 + delta)


@dataclass
class SparseRecord:
    N: int
    average: float
    observable: str
    x: SurfacePoint
    delta: float

    def to_dict(self) -> dict:
        out = asdict(self)
        base = self.x.base_point()
        out["x"] = {"re": base.real, "im": base.imag}
        return out


def shah_average(
    obs: Observable, x: SurfacePoint, delta: float, N: int
) -> SparseRecord:
    """
    Average (1/N) Σ_{n<N} f(h_{n^{1+δ}} x) of the observable along the sparse times
    n^{1+δ} of the horocycle orbit.

    Raises:
        PrecisionLimit: If (N-1)^{1+δ} exceeds 10^12.
    """
    if not 0 <= delta < 1:
        raise InvalidArgument(f"Sparse sums require 0 <= δ < 1, got delta={delta!r}")
    if N < 1:
        raise InvalidArgument(f"Sparse averages require N >= 1, got N={N}")
    check_orbit_time(float(N - 1) ** (1 + delta))
    total = chunked_sum(
        lambda n: orbit_values(obs, x, sparse_times(n, delta)), count=N
    )
    return SparseRecord(
        N=N, average=total / N, observable=repr(obs), x=x, delta=delta
    )


def progression_vs_sparse(
    obs: Observable, x: SurfacePoint, delta: float, epsilon: float, N: int
) -> float:
    """
    (1/N) |Σ_{N_1 <= n < N_J} f(h_{n^{1+δ}} x) - Σ_j Σ_k f(h_{N_j^{1+δ} + k L_j} x)|,
    the error of replacing the sparse times by the arithmetic progressions of the
    blocks.
    """
    check_parameters(delta, epsilon)
    blocks = venkatesh_blocks(N, delta, epsilon)
    first = blocks.starts[0]
    count = blocks.starts[-1] - first
    check_orbit_time(float(blocks.starts[-1]) ** (1 + delta))
    times = progression_times(blocks)
    assert times.size(0) == count, (
        f"Progression has {times.size(0)} terms, expected {count}"
    )
    sparse = chunked_sum(
        lambda i: orbit_values(obs, x, sparse_times(first + i, delta)), count=count
    )
    progression = chunked_sum(lambda i: orbit_values(obs, x, times[i]), count=count)
    return abs(sparse - progression) / N


def progression_bound(N: int, epsilon: float, lipschitz: float) -> float:
    """
    10 N^{-2ε(1-ε)} Lip, the bound of the progression error of N terms.
    """
    return 10 * N ** (-2 * epsilon * (1 - epsilon)) * lipschitz


def empirical_lipschitz(
    obs: Observable, x: SurfacePoint, times: torch.Tensor, step: float = 1e-4
) -> float:
    """
    Largest difference quotient |f(h_{t+s} x) - f(h_t x)| / s over the given times,
    an estimate of the Lipschitz constant of the observable along the orbit.
    """
    times = times.to(torch.float64)
    moved = orbit_values(obs, x, times + step)
    return ((moved - orbit_values(obs, x, times)).abs().max() / step).item()


@dataclass
class MapSumGap:
    N: int
    L: float
    map_sum: float
    flow_integral: float
    # Quadrature error estimate of the flow integral, divided by L
    err_est: float
    converged: bool

    @property
    def value(self) -> float:
        return abs(self.map_sum - self.flow_integral)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["value"] = self.value
        return out


def map_sum_vs_flow(
    obs: Observable,
    x: SurfacePoint,
    L: float,
    N: int,
    spec: QuadratureSpec = QuadratureSpec(),
) -> MapSumGap:
    """
    Difference between the sum Σ_{k<N} f(h_{Lk} x) along the time-L map and the
    flow integral (1/L) ∫_0^{NL} f(h_t x) dt over the same time span.
    """
    if not (math.isfinite(L) and L > 0):
        raise InvalidArgument(f"map_sum_vs_flow requires L > 0, got L={L!r}")
    if N < 1:
        raise InvalidArgument(f"map_sum_vs_flow requires N >= 1, got N={N}")
    check_orbit_time(N * L)
    map_sum = chunked_sum(
        lambda k: orbit_values(obs, x, L * k.to(torch.float64)), count=N
    )
    integral = ergodic_integral(x, obs, N * L, spec)
    return MapSumGap(
        N=N,
        L=L,
        map_sum=map_sum,
        flow_integral=integral.value.real / L,
        err_est=integral.err_est / L,
        converged=integral.converged,
    )
