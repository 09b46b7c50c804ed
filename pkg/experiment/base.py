from dataclasses import dataclass
from pathlib import Path
from typing import Any

from simple_parsing import Serializable

from errors import InvalidArgument
from record import Check
from returns import Calibration, load_calibration

type Row = dict[str, Any]


@dataclass
class NoParams(Serializable):
    pass


class BaseExperiment:
    """
    An experiment is a sweep over independent tasks, each of which measures one or
    more rows, and a set of checks over all rows.

    Subclasses define the `kind`, the dataclass of their parameters and the columns
    that identify a row. The tasks must be picklable, so that they can run in a pool.
    """

    kind: str
    params_class: type[Serializable] = NoParams
    # Columns that identify a row, the rows are written sorted by them.
    parameter_columns: tuple[str, ...] = ()

    def __init__(
        self,
        params: Serializable | None = None,
        seed: int = 0,
        calibration: Path | None = None,
    ):
        self.params = self.params_class() if params is None else params
        if not isinstance(self.params, self.params_class):
            raise InvalidArgument(
                f"Experiment {self.kind!r} requires {self.params_class.__name__}, "
                f"got {type(self.params).__name__}"
            )
        self.seed = seed
        self.calibration = calibration

    def tasks(self) -> list:
        raise NotImplementedError("tasks() is not implemented")

    def measure(self, task) -> list[Row]:
        raise NotImplementedError("measure() is not implemented")

    def checks(self, rows: list[Row]) -> list[Check]:
        raise NotImplementedError("checks() is not implemented")

    def finish(self, rows: list[Row]) -> str | None:
        """
        Called once after all rows were measured. Returns a message for the console,
        if there is anything to report.
        """
        return None

    def sort_rows(self, rows: list[Row]) -> list[Row]:
        return sorted(
            rows, key=lambda row: tuple(row[name] for name in self.parameter_columns)
        )

    def load_calibration(self) -> Calibration:
        if self.calibration is None or not self.calibration.is_file():
            raise InvalidArgument(
                f"Experiment {self.kind!r} requires a calibration file, "
                f"{str(self.calibration)!r} does not exist. "
                "Create one with the `calibrate` experiment first."
            )
        return load_calibration(self.calibration)


def column(rows: list[Row], name: str) -> list:
    return [row[name] for row in rows]


def rows_where(rows: list[Row], **conditions: Any) -> list[Row]:
    return [
        row
        for row in rows
        if all(row[key] == value for key, value in conditions.items())
    ]
