import sys

import torch
from progrich import Manager
from rich.console import Console

from config.lab import LabConfig
from config.params import read_params
from errors import LabError
from experiment import EXPERIMENTS, create_experiment
from experiment.runner import run_experiment
from returns import calibration_path


def main() -> int:
    """
    Exit codes: 0 when all checks pass, 1 when a check fails and 2 for invalid
    configurations, errors of the lab and runs that stopped at a resource limit.
    """
    cfg = LabConfig.parse_config()
    torch.manual_seed(cfg.seed)

    console = Console(quiet=cfg.quiet)
    Manager.default().set_console(console)
    # Errors are shown even in quiet mode
    error_console = Console(stderr=True)

    try:
        params_class = EXPERIMENTS[cfg.experiment].params_class
        params = read_params(params_class, cfg.config)
        experiment = create_experiment(
            cfg.experiment,
            params,
            seed=cfg.seed,
            calibration=calibration_path(cfg.calibration),
        )
        run = run_experiment(experiment, out_dir=cfg.out, jobs=cfg.jobs)
    except LabError as e:
        error_console.print(f"Error: {e}", style="red", markup=False, highlight=False)
        return 2

    if run.message:
        console.print(run.message, markup=False, highlight=False)
    console.print(run.table())
    if run.partial:
        error_console.print(
            f"Stopped early, partial results in {run.out_dir}: {run.manifest.error}",
            style="red",
            markup=False,
            highlight=False,
        )
        return 2
    return 0 if run.manifest.passed else 1


if __name__ == "__main__":
    sys.exit(main())
