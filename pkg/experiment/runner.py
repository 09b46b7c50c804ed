import time
from dataclasses import dataclass
from pathlib import Path

from rich.table import Table

from errors import ResourceLimit
from record import (
    Check,
    Manifest,
    create_manifest,
    table_from_checks,
    write_results,
)
from utils.pool import parallel_map

from .base import BaseExperiment, Row


@dataclass
class ExperimentRun:
    manifest: Manifest
    rows: list[Row]
    checks: list[Check]
    out_dir: Path
    # Summary of the experiment for the console
    message: str | None = None

    @property
    def partial(self) -> bool:
        return self.manifest.partial

    def table(self) -> Table:
        return table_from_checks(
            self.checks,
            title=self.manifest.experiment,
            time_elapsed=self.manifest.wall_time,
            out_dir=self.out_dir,
            partial=self.partial,
        )


def experiment_config(experiment: BaseExperiment) -> dict:
    """
    Everything that determines the results of the experiment, which is what the
    config hash is computed from.
    """
    return dict(
        experiment=experiment.kind,
        seed=experiment.seed,
        params=experiment.params.to_dict(),
    )


def run_experiment(
    experiment: BaseExperiment, out_dir: Path, jobs: int = 1
) -> ExperimentRun:
    """
    Measure all tasks of the experiment, evaluate its checks and write the results to
    <out_dir>/<kind>/.

    The rows are sorted by their parameter columns, so the files do not depend on the
    number of jobs. When a task hits a resource limit, the rows of the preceding tasks
    are written with the run flagged as partial and without any checks.
    """
    start = time.time()
    tasks = experiment.tasks()
    rows: list[Row] = []
    error = None
    try:
        for task_rows in parallel_map(
            experiment.measure,
            tasks,
            jobs=jobs,
            name=f"Running {experiment.kind}",
            seed=experiment.seed,
        ):
            rows.extend(task_rows)
    except ResourceLimit as e:
        error = str(e)
    partial = error is not None
    rows = experiment.sort_rows(rows)
    checks = [] if partial else experiment.checks(rows)
    message = None if partial else experiment.finish(rows)
    calibration = experiment.calibration
    if calibration is not None and not calibration.is_file():
        calibration = None
    manifest = create_manifest(
        experiment.kind,
        experiment_config(experiment),
        calibration,
        wall_time=time.time() - start,
        checks=checks,
        partial=partial,
        error=error,
    )
    experiment_dir = out_dir / experiment.kind
    write_results(experiment_dir, manifest, rows, checks)
    return ExperimentRun(
        manifest=manifest,
        rows=rows,
        checks=checks,
        out_dir=experiment_dir,
        message=message,
    )
