import math
from dataclasses import dataclass

import torch
from simple_parsing import Serializable, field

from errors import InvalidArgument
from record import Check
from surface import height_distance, loglaw_statistic, sample_points

from .base import BaseExperiment, Row, column, rows_where


def median(values: list[float]) -> float:
    return torch.quantile(torch.tensor(values, dtype=torch.float64), 0.5).item()


@dataclass
class LoglawParams(Serializable):
    # Number of sampled starting points.
    points: int = 50
    # Lengths T of the geodesic segments.
    lengths: list[float] = field(default_factory=lambda: [1e3, 1e4, 1e5])
    # Sampling step of the geodesic orbit.
    step: float = 0.05
    # Length T whose median must lie in [lower, upper].
    median_length: float = 1e4
    lower: float = 0.3
    upper: float = 1.0
    # Accepted growth of the median from the shortest to the longest length.
    slack: float = 0.1

    def __post_init__(self):
        if self.points < 1:
            raise InvalidArgument(f"loglaw requires points >= 1, got {self.points}")
        if len(self.lengths) == 0 or min(self.lengths) < math.e:
            raise InvalidArgument(
                f"loglaw requires lengths T >= e, got lengths={self.lengths}"
            )
        if self.median_length not in self.lengths:
            raise InvalidArgument(
                f"loglaw requires median_length={self.median_length!r} to be one of "
                f"the lengths {self.lengths}"
            )


class LoglawExperiment(BaseExperiment):
    """
    max_{t <= T} d_M(a_t x) / log T over sampled points, whose median stays near 1/2
    and grows at most slowly with T.
    """

    kind = "loglaw"
    params_class = LoglawParams
    parameter_columns = ("point", "T")
    params: LoglawParams

    def tasks(self) -> list[tuple[int, float]]:
        return [
            (point, T)
            for point in range(self.params.points)
            for T in sorted(set(self.params.lengths))
        ]

    def measure(self, task: tuple[int, float]) -> list[Row]:
        point, T = task
        x = sample_points(self.seed, self.params.points)[point]
        return [
            dict(
                point=point,
                T=T,
                d_m=height_distance(x),
                statistic=loglaw_statistic(x, T, step=self.params.step),
            )
        ]

    def medians(self, rows: list[Row]) -> dict[float, float]:
        return {
            T: median(column(rows_where(rows, T=T), "statistic"))
            for T in sorted(set(column(rows, "T")))
        }

    def checks(self, rows: list[Row]) -> list[Check]:
        medians = self.medians(rows)
        at_length = medians[self.params.median_length]
        shortest, longest = min(medians), max(medians)
        name = f"median at T={self.params.median_length:g}"
        return [
            Check.at_least(f"{name} (lower)", at_length, self.params.lower),
            Check.at_most(f"{name} (upper)", at_length, self.params.upper),
            Check.at_most(
                "median growth",
                medians[longest] - medians[shortest],
                self.params.slack,
            ),
        ]

    def finish(self, rows: list[Row]) -> str | None:
        medians = ", ".join(
            f"T={T:g}: {value:.3f}" for T, value in self.medians(rows).items()
        )
        return f"Medians of the log-law statistic: {medians}"
