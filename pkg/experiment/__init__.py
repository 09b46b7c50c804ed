from pathlib import Path
from typing import Literal

from simple_parsing import Serializable

from .base import BaseExperiment, NoParams, Row, column, rows_where
from .coefficients import GoodBoundExperiment, ShiftExperiment, TauExperiment
from .diagnostics import LoglawExperiment
from .identities import IdentitiesExperiment
from .integrals import MapsExperiment, ScalingExperiment
from .returns import CalibrateExperiment, ReturnsExperiment, WidthExperiment
from .sparse import SparseExperiment
from .spectral import CoeqnExperiment, UTauExperiment

type ExperimentKind = Literal[
    "tau",
    "good-bound",
    "scaling",
    "sparse",
    "returns",
    "coeqn",
    "loglaw",
    "utau",
    "identities",
    "shift",
    "maps",
    "width",
    "calibrate",
]

EXPERIMENTS: dict[str, type[BaseExperiment]] = {
    experiment.kind: experiment
    for experiment in [
        TauExperiment,
        GoodBoundExperiment,
        ScalingExperiment,
        SparseExperiment,
        ReturnsExperiment,
        CoeqnExperiment,
        LoglawExperiment,
        UTauExperiment,
        IdentitiesExperiment,
        ShiftExperiment,
        MapsExperiment,
        WidthExperiment,
        CalibrateExperiment,
    ]
}


def create_experiment(
    kind: ExperimentKind,
    params: Serializable | None = None,
    seed: int = 0,
    calibration: Path | None = None,
) -> BaseExperiment:
    Experiment = EXPERIMENTS.get(kind)
    if Experiment is None:
        options = " | ".join([repr(m) for m in EXPERIMENTS])
        raise ValueError(
            f"No experiment for `kind={kind!r}`, must be one of: {options}"
        )
    return Experiment(params=params, seed=seed, calibration=calibration)


__all__ = [
    "BaseExperiment",
    "NoParams",
    "Row",
    "column",
    "rows_where",
    "CalibrateExperiment",
    "CoeqnExperiment",
    "GoodBoundExperiment",
    "IdentitiesExperiment",
    "LoglawExperiment",
    "MapsExperiment",
    "ReturnsExperiment",
    "ScalingExperiment",
    "ShiftExperiment",
    "SparseExperiment",
    "TauExperiment",
    "UTauExperiment",
    "WidthExperiment",
    "ExperimentKind",
    "EXPERIMENTS",
    "create_experiment",
]
