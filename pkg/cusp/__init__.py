from .eta import DEFAULT_TRUNCATION, eta, eta_batch, required_truncation
from .forms import (
    FORM_WEIGHTS,
    CuspFormKind,
    CuspFormSpec,
    evaluate_form,
    evaluate_form_batch,
    lift,
    lift_batch,
    lift_batch_reduced,
    lift_point,
)
from .observables import (
    OBSERVABLES,
    ConstantObservable,
    DeltaObservable,
    NormalisedDeltaObservable,
    Observable,
    ObservableKind,
    create_observable,
)
from .oracle import QExpansionOracle, tau_oracle

__all__ = [
    "DEFAULT_TRUNCATION",
    "eta",
    "eta_batch",
    "required_truncation",
    "FORM_WEIGHTS",
    "CuspFormKind",
    "CuspFormSpec",
    "evaluate_form",
    "evaluate_form_batch",
    "lift",
    "lift_batch",
    "lift_batch_reduced",
    "lift_point",
    "OBSERVABLES",
    "ConstantObservable",
    "DeltaObservable",
    "NormalisedDeltaObservable",
    "Observable",
    "ObservableKind",
    "create_observable",
    "QExpansionOracle",
    "tau_oracle",
]
