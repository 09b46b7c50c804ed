from dataclasses import dataclass

from simple_parsing import Serializable, field

from cusp import DeltaObservable
from errors import InvalidArgument
from record import Check
from sparse import map_sum_vs_flow
from surface import sample_points
from twisted import QuadratureSpec, exponent_fit, twisted_orbit_integral

from .base import BaseExperiment, Row, column, rows_where


def mean_fit_slope(rows: list[Row], time: str, value: str) -> float:
    """
    Slope of the log of the value, averaged over the points, against the log of the
    time.
    """
    samples = []
    for t in sorted(set(column(rows, time))):
        values = column(rows_where(rows, **{time: t}), value)
        samples.append((float(t), sum(values) / len(values)))
    return exponent_fit(samples).slope


@dataclass
class ScalingParams(Serializable):
    # Number of sampled starting points.
    points: int = 5
    # Twist λ of the integrals.
    lam: float = 1.0
    # Lengths T of the orbit segments.
    lengths: list[float] = field(
        default_factory=lambda: [16.0, 32.0, 64.0, 128.0, 256.0, 512.0]
    )
    # Slack added to the exponent 5/6.
    slack: float = 0.1
    tol: float = 1e-8

    def __post_init__(self):
        if self.points < 1:
            raise InvalidArgument(f"scaling requires points >= 1, got {self.points}")
        if self.lam == 0:
            raise InvalidArgument("scaling requires a twist λ != 0")
        if len(set(self.lengths)) < 4 or min(self.lengths) <= 0:
            raise InvalidArgument(
                f"scaling requires at least 4 distinct positive lengths, "
                f"got lengths={self.lengths}"
            )


class ScalingExperiment(BaseExperiment):
    """
    Growth in T of the twisted ergodic integrals |∫_0^T e^{iλt} f(h_t x) dt| of
    Re lift(Δ), whose exponent is at most 5/6.
    """

    kind = "scaling"
    params_class = ScalingParams
    parameter_columns = ("point", "T")
    params: ScalingParams

    def tasks(self) -> list[tuple[int, float]]:
        return [
            (point, T)
            for point in range(self.params.points)
            for T in sorted(set(self.params.lengths))
        ]

    def measure(self, task: tuple[int, float]) -> list[Row]:
        point, T = task
        x = sample_points(self.seed, self.params.points)[point]
        spec = QuadratureSpec(tol=self.params.tol)
        obs = DeltaObservable()
        integral = twisted_orbit_integral(x, obs, self.params.lam, T, spec)
        return [
            dict(
                point=point,
                T=T,
                value=integral.value.real,
                value_im=integral.value.imag,
                magnitude=abs(integral.value),
                err_est=integral.err_est,
                converged=integral.converged,
            )
        ]

    def checks(self, rows: list[Row]) -> list[Check]:
        return [
            Check.at_most(
                "growth exponent",
                mean_fit_slope(rows, "T", "magnitude"),
                5 / 6 + self.params.slack,
            ),
            Check.at_most(
                "unconverged integrals",
                sum(1 for converged in column(rows, "converged") if not converged),
                0,
            ),
        ]


@dataclass
class MapsParams(Serializable):
    # Number of sampled starting points.
    points: int = 5
    # Time L of the horocycle map.
    length: float = 1.0
    # Smallest exponent j of the numbers of steps N = 2^j.
    j_min: int = 7
    # Largest exponent j of the numbers of steps N = 2^j.
    j_max: int = 13
    # Slack added to the exponent 5/6.
    slack: float = 0.1
    tol: float = 1e-8

    def __post_init__(self):
        if self.points < 1:
            raise InvalidArgument(f"maps requires points >= 1, got {self.points}")
        if not (0 <= self.j_min and self.j_max - self.j_min + 1 >= 4):
            raise InvalidArgument(
                "maps requires 0 <= j_min and at least 4 step counts, "
                f"got j_min={self.j_min}, j_max={self.j_max}"
            )


class MapsExperiment(BaseExperiment):
    """
    Growth in N of the difference between the sums of Re lift(Δ) along the time-L
    horocycle map and the flow integral over the same time, with exponent at most
    5/6.
    """

    kind = "maps"
    params_class = MapsParams
    parameter_columns = ("point", "N")
    params: MapsParams

    def tasks(self) -> list[tuple[int, int]]:
        return [
            (point, 2**j)
            for point in range(self.params.points)
            for j in range(self.params.j_min, self.params.j_max + 1)
        ]

    def measure(self, task: tuple[int, int]) -> list[Row]:
        point, N = task
        x = sample_points(self.seed, self.params.points)[point]
        gap = map_sum_vs_flow(
            DeltaObservable(),
            x,
            self.params.length,
            N,
            QuadratureSpec(tol=self.params.tol),
        )
        return [dict(point=point, **gap.to_dict())]

    def checks(self, rows: list[Row]) -> list[Check]:
        gaps = column(rows, "value")
        return [
            Check.finite("non-finite gaps", gaps),
            Check.at_most(
                "growth exponent",
                mean_fit_slope(rows, "N", "value"),
                5 / 6 + self.params.slack,
            ),
        ]

