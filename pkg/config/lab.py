import typing
from dataclasses import dataclass
from pathlib import Path

from simple_parsing import choice, field

from experiment import ExperimentKind

from .entry import ConfigEntry


@dataclass
class LabConfig(ConfigEntry):
    """
    Run one experiment of the lab and write its results.
    """

    # Experiment to run.
    experiment: ExperimentKind = choice(
        *typing.get_args(ExperimentKind.__value__), positional=True
    )
    # Path to a flat key=value file with the parameters of the experiment. Parameters
    # that are not given keep their defaults.
    config: Path | None = field(default=None, alias="-c")
    # Output directory, the results are written to <out>/<experiment>/.
    out: Path = field(default=Path("results"), alias="-o")
    # Random seed, together with the experiment and its parameters it fully
    # determines the results.
    seed: int = field(default=0, alias="-s")
    # Number of processes for independent rows of the experiment.
    jobs: int = field(default=1, alias="-j")
    # Path to the calibration file of the close-return constants. The environment
    # variable HOROLAB_CALIBRATION takes precedence over it.
    calibration: Path | None = None
    # Do not print anything to the console, except errors.
    quiet: bool = field(action="store_true")
