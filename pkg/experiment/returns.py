import math
from dataclasses import dataclass, fields, replace

from simple_parsing import Serializable, field

from errors import InvalidArgument
from record import Check
from returns import (
    CalibrationPoint,
    InjectivityGrid,
    ReturnEvent,
    calibration_point,
    count_bound_check,
    find_beta_returns,
    fit_calibration,
    injectivity_scale,
    injectivity_search,
    return_step,
    select_events,
    separation_check,
    store_calibration,
    thick_points,
    width_integral,
)
from surface import SurfacePoint

from .base import BaseExperiment, Row, column


def detect_returns(
    x: SurfacePoint, scale: float, T: float, grid: InjectivityGrid
) -> tuple[float, list[ReturnEvent]]:
    c = injectivity_search(x, scale * T, grid)
    return c, find_beta_returns(x, scale, T, return_step(scale, c), c=c)


def refined(grid: InjectivityGrid) -> InjectivityGrid:
    """
    The grid with twice the resolution along every axis.
    """
    return replace(
        grid,
        step=grid.step / 2,
        min_points=2 * grid.min_points - 1,
        z_points=2 * grid.z_points - 1,
    )


@dataclass
class ReturnsParams(Serializable):
    # Number of sampled points in the thick part.
    points: int = 20
    # Lengths T of the rescaled orbit segments.
    lengths: list[float] = field(default_factory=lambda: [10.0, 30.0])
    # The rescaling 𝒯 of the horocycle flow.
    scale: float = 1.0
    # Spacing of the injectivity grid.
    grid_step: float = 0.25

    def __post_init__(self):
        if self.points < 1:
            raise InvalidArgument(f"returns requires points >= 1, got {self.points}")
        if len(self.lengths) == 0 or min(self.lengths) < 1:
            raise InvalidArgument(
                f"returns requires lengths T >= 1, got lengths={self.lengths}"
            )
        if not self.scale >= 1:
            raise InvalidArgument(f"returns requires scale >= 1, got {self.scale!r}")


class ReturnsExperiment(BaseExperiment):
    """
    Close returns of horocycle orbits per shell β, counted against the bounds of the
    frozen calibration, and the separation of the non-degenerate ones.
    """

    kind = "returns"
    params_class = ReturnsParams
    parameter_columns = ("point", "T", "beta")
    params: ReturnsParams

    def tasks(self) -> list[tuple[int, float]]:
        # Fail before any work without a calibration.
        self.load_calibration()
        return [
            (point, T)
            for point in range(self.params.points)
            for T in sorted(set(self.params.lengths))
        ]

    def measure(self, task: tuple[int, float]) -> list[Row]:
        point, T = task
        scale = self.params.scale
        calibration = self.load_calibration()
        x = thick_points(self.seed, self.params.points)[point]
        grid = InjectivityGrid(step=self.params.grid_step)
        c, events = detect_returns(x, scale, T, grid)
        rows = []
        for report in count_bound_check(events, scale, T, calibration):
            separation = separation_check(
                select_events(events, report.beta), report.beta, scale, calibration
            )
            rows.append(
                dict(
                    point=point,
                    T=T,
                    beta=report.beta,
                    c=c,
                    count=report.count,
                    bound=report.bound,
                    degenerate_count=report.degenerate_count,
                    degenerate_bound=report.degenerate_bound,
                    min_gap=separation.min_gap,
                    threshold=separation.threshold,
                    separated=separation.passed,
                )
            )
        return rows

    def checks(self, rows: list[Row]) -> list[Check]:
        return [
            Check.at_most(
                "max count ratio",
                max(row["count"] / row["bound"] for row in rows),
                1,
            ),
            Check.at_most(
                "max degenerate count ratio",
                max(row["degenerate_count"] / row["degenerate_bound"] for row in rows),
                1,
            ),
            Check.at_most(
                "separation failures",
                sum(1 for separated in column(rows, "separated") if not separated),
                0,
            ),
        ]


@dataclass
class WidthParams(Serializable):
    # Index of the thick point whose orbit is widened.
    point: int = 0
    # Rescalings 𝒯.
    scales: list[float] = field(default_factory=lambda: [1.0, 2.0, 4.0])
    # Lengths T of the orbit segments.
    lengths: list[float] = field(default_factory=lambda: [10.0, 20.0, 40.0])
    grid_step: float = 0.25
    # Largest accepted max/min of the fitted constants.
    max_spread: float = 10.0

    def __post_init__(self):
        if self.point < 0:
            raise InvalidArgument(f"width requires point >= 0, got {self.point}")
        if len(self.scales) == 0 or min(self.scales) < 1:
            raise InvalidArgument(f"width requires scales >= 1, got {self.scales}")
        if len(self.lengths) == 0 or min(self.lengths) < 1:
            raise InvalidArgument(f"width requires lengths >= 1, got {self.lengths}")


class WidthExperiment(BaseExperiment):
    """
    Average inverse width of the tube around an orbit segment, divided by
    c² T (1 + log(𝒯^{1/3} T)). The quotient is the constant of the width bound and
    stays within a bounded factor over the (𝒯, T) grid.
    """

    kind = "width"
    params_class = WidthParams
    parameter_columns = ("scale", "T")
    params: WidthParams

    def tasks(self) -> list[tuple[float, float]]:
        return [
            (scale, T)
            for scale in sorted(set(self.params.scales))
            for T in sorted(set(self.params.lengths))
        ]

    def measure(self, task: tuple[float, float]) -> list[Row]:
        scale, T = task
        x = thick_points(self.seed, self.params.point + 1)[self.params.point]
        grid = InjectivityGrid(step=self.params.grid_step)
        c, events = detect_returns(x, scale, T, grid)
        profile = width_integral(x, scale, T, events, c=c)
        return [
            dict(
                scale=scale,
                T=T,
                c=c,
                events=len(events),
                integral=profile.integral,
                baseline=profile.baseline,
                normalised=profile.normalised,
            )
        ]

    def checks(self, rows: list[Row]) -> list[Check]:
        constants = column(rows, "normalised")
        finite = [k for k in constants if math.isfinite(k) and k > 0]
        spread = max(finite) / min(finite) if len(finite) > 0 else math.inf
        return [
            Check.finite("non-finite integrals", constants),
            Check.at_most("constant spread", spread, self.params.max_spread),
        ]


@dataclass
class CalibrateParams(Serializable):
    # Number of sampled points in the thick part.
    points: int = 20
    # The rescaling 𝒯 and length T at which degenerate returns are counted.
    scale: float = 1.0
    T: float = 10.0
    grid_step: float = 0.25
    # Repeat the injectivity scales on a grid of twice the resolution.
    stability: bool = False
    # Largest accepted relative change of C_Gamma on the refined grid.
    max_change: float = 0.1

    def __post_init__(self):
        if self.points < 1:
            raise InvalidArgument(f"calibrate requires points >= 1, got {self.points}")


class CalibrateExperiment(BaseExperiment):
    """
    Fit C_Gamma and C_Gamma_prime on thick points and write them to the calibration
    file, which is left untouched when it already holds the same constants.
    """

    kind = "calibrate"
    params_class = CalibrateParams
    parameter_columns = ("index",)
    params: CalibrateParams

    def grid(self) -> InjectivityGrid:
        return InjectivityGrid(step=self.params.grid_step)

    def tasks(self) -> list[int]:
        if self.calibration is None:
            raise InvalidArgument("calibrate requires the path of the calibration file")
        return list(range(self.params.points))

    def measure(self, index: int) -> list[Row]:
        p = self.params
        x = thick_points(self.seed, p.points)[index]
        point = calibration_point(x, self.seed, index, self.grid(), p.scale, p.T)
        row = point.to_dict()
        if p.stability:
            row["refined_scale"] = injectivity_scale(x, refined(self.grid()))
        return [row]

    def observations(self, rows: list[Row]) -> list[CalibrationPoint]:
        names = [f.name for f in fields(CalibrationPoint)]
        return [CalibrationPoint(**{name: row[name] for name in names}) for row in rows]

    def checks(self, rows: list[Row]) -> list[Check]:
        calibration = fit_calibration(self.observations(rows), self.seed)
        checks = [
            Check.at_least("C_Gamma (lower)", calibration.c_gamma, 0),
            Check.at_most("C_Gamma (upper)", calibration.c_gamma, 1),
            Check.finite("non-finite scales", column(rows, "injectivity_scale")),
        ]
        if self.params.stability:
            refined_rows = [
                dict(row, injectivity_scale=row["refined_scale"]) for row in rows
            ]
            c_refined = fit_calibration(
                self.observations(refined_rows), self.seed
            ).c_gamma
            checks.append(
                Check.at_most(
                    "C_Gamma change on refined grid",
                    abs(c_refined - calibration.c_gamma) / calibration.c_gamma,
                    self.params.max_change,
                )
            )
        return checks

    def finish(self, rows: list[Row]) -> str | None:
        assert self.calibration is not None
        calibration = fit_calibration(self.observations(rows), self.seed)
        written = store_calibration(calibration, self.calibration)
        status = "written to" if written else "unchanged in"
        return (
            f"Calibration C_Gamma={calibration.c_gamma!r}, "
            f"C_Gamma_prime={calibration.c_gamma_prime!r} {status} {self.calibration}"
        )
