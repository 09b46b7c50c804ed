from dataclasses import dataclass

from simple_parsing import Serializable, field

from cusp import NormalisedDeltaObservable
from errors import InvalidArgument
from record import Check
from sparse import (
    empirical_lipschitz,
    linearization_bound,
    max_linearization_error,
    progression_bound,
    progression_times,
    progression_vs_sparse,
    shah_average,
    venkatesh_blocks,
)
from surface import sample_points

from .base import BaseExperiment, Row, rows_where


@dataclass
class SparseParams(Serializable):
    # Sparse times n^{1+δ}.
    delta: float = 0.05
    # Numbers of terms N of the averages.
    ns: list[int] = field(default_factory=lambda: [1000, 100000])
    # Exponent ε of the block decomposition, 0 < ε < (1-δ)/2.
    epsilon: float = 0.1
    # Number of sampled starting points.
    points: int = 1
    # Fraction of the first average that the last one must not exceed.
    decay: float = 0.5
    # Averages below this always pass.
    floor: float = 0.05

    def __post_init__(self):
        if not 0 <= self.delta < 1:
            raise InvalidArgument(f"sparse requires 0 <= δ < 1, got {self.delta!r}")
        if len(set(self.ns)) < 2 or min(self.ns) < 2:
            raise InvalidArgument(
                f"sparse requires at least 2 distinct N >= 2, got ns={self.ns}"
            )
        if self.points < 1:
            raise InvalidArgument(f"sparse requires points >= 1, got {self.points}")


class SparseExperiment(BaseExperiment):
    """
    Averages of the normalised Re lift(Δ) along the sparse times n^{1+δ}, which decay
    with N, with the error of the block linearization that drives the decay.
    """

    kind = "sparse"
    params_class = SparseParams
    parameter_columns = ("point", "N")
    params: SparseParams

    def tasks(self) -> list[tuple[int, int]]:
        return [
            (point, N)
            for point in range(self.params.points)
            for N in sorted(set(self.params.ns))
        ]

    def measure(self, task: tuple[int, int]) -> list[Row]:
        point, N = task
        p = self.params
        x = sample_points(self.seed, p.points)[point]
        obs = NormalisedDeltaObservable(seed=self.seed)
        record = shah_average(obs, x, p.delta, N)
        blocks = venkatesh_blocks(N, p.delta, p.epsilon)
        bound = max(
            (
                linearization_bound(start, length - 1, p.delta)
                for start, length in zip(blocks.starts, blocks.block_lengths())
            ),
            default=0.0,
        )
        times = progression_times(blocks)
        lipschitz = empirical_lipschitz(obs, x, times) if times.numel() > 0 else 0.0
        return [
            dict(
                point=point,
                N=N,
                average=record.average,
                abs_average=abs(record.average),
                progression_error=progression_vs_sparse(
                    obs, x, p.delta, p.epsilon, N
                ),
                lipschitz=lipschitz,
                progression_bound=progression_bound(N, p.epsilon, lipschitz),
                blocks=blocks.num_blocks,
                linearization_error=max_linearization_error(blocks),
                linearization_bound=bound,
            )
        ]

    def checks(self, rows: list[Row]) -> list[Check]:
        p = self.params
        first, last = min(p.ns), max(p.ns)
        checks = []
        for point in range(p.points):
            (initial,) = rows_where(rows, point=point, N=first)
            (final,) = rows_where(rows, point=point, N=last)
            checks.append(
                Check.at_most(
                    f"point {point} average at N={last}",
                    final["abs_average"],
                    max(p.decay * initial["abs_average"], p.floor),
                )
            )
        checks.append(
            Check.at_most(
                "linearization excess",
                max(
                    row["linearization_error"] - row["linearization_bound"]
                    for row in rows
                ),
                0,
            )
        )
        checks.append(
            Check.at_most(
                "progression excess",
                max(
                    row["progression_error"] - row["progression_bound"]
                    for row in rows
                ),
                0,
            )
        )
        return checks
