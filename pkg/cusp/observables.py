from functools import cache
from typing import Literal

import torch

from flow import GroupElement
from surface import SurfacePoint, reduce_batch, sample_frames

from .forms import CuspFormSpec, lift_batch_reduced

type ObservableKind = Literal["constant", "delta", "delta-normalised"]

# Number of sampled points used for the empirical sup of the normalised observable.
NORMALISATION_SAMPLES = 10_000


class Observable:
    """
    A real valued function on M, evaluated on batches of frames of size [..., 2, 2].
    Frames are reduced before evaluation, so any representative of a point can be
    given.
    """

    kind: str

    def __call__(self, frames: torch.Tensor) -> torch.Tensor:
        reduced, _ = reduce_batch(frames)
        return self.evaluate_reduced(reduced)

    def evaluate_reduced(self, reduced: torch.Tensor) -> torch.Tensor:
        raise NotImplementedError(
            "Observable must implement the `evaluate_reduced` method"
        )

    def at(self, x: SurfacePoint | GroupElement) -> float:
        frame = x.reduced if isinstance(x, SurfacePoint) else x
        return self(frame.to_tensor().unsqueeze(0))[0].item()

    def is_constant(self) -> bool:
        return False

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}()"


class ConstantObservable(Observable):
    kind = "constant"

    def __init__(self, value: float = 1.0):
        self.value = value

    def __call__(self, frames: torch.Tensor) -> torch.Tensor:
        # Nothing to reduce for a constant
        return torch.full(frames.size()[:-2], self.value, dtype=torch.float64)

    def evaluate_reduced(self, reduced: torch.Tensor) -> torch.Tensor:
        return torch.full(reduced.size()[:-2], self.value, dtype=torch.float64)

    def is_constant(self) -> bool:
        return True

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(value={self.value})"


class DeltaObservable(Observable):
    """
    Real part of the lift of Δ to M, optionally multiplied by a fixed scale.
    """

    kind = "delta"

    def __init__(self, spec: CuspFormSpec | None = None, scale: float = 1.0):
        self.spec = spec or CuspFormSpec()
        self.scale = scale

    def evaluate_reduced(self, reduced: torch.Tensor) -> torch.Tensor:
        return self.scale * lift_batch_reduced(self.spec, reduced).real

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(spec={self.spec}, scale={self.scale})"


@cache
def empirical_sup(
    spec: CuspFormSpec, seed: int = 0, count: int = NORMALISATION_SAMPLES
) -> float:
    """
    sup |Re lift| over a fixed batch of sampled points.
    """
    reduced, _ = reduce_batch(sample_frames(seed, count))
    return lift_batch_reduced(spec, reduced).real.abs().max().item()


class NormalisedDeltaObservable(DeltaObservable):
    """
    Re lift(Δ) divided by its empirical sup over 10^4 sampled points, so that decay
    thresholds do not depend on the scale of Δ.
    """

    kind = "delta-normalised"

    def __init__(self, spec: CuspFormSpec | None = None, seed: int = 0):
        spec = spec or CuspFormSpec()
        super().__init__(spec=spec, scale=1.0 / empirical_sup(spec, seed=seed))
        self.seed = seed


OBSERVABLES: dict[str, type[Observable]] = {
    observable.kind: observable
    for observable in [ConstantObservable, DeltaObservable, NormalisedDeltaObservable]
}


def create_observable(kind: ObservableKind, *args, **kwargs) -> Observable:
    ObservableClass = OBSERVABLES.get(kind)
    if ObservableClass is None:
        options = " | ".join([repr(m) for m in OBSERVABLES])
        raise ValueError(
            f"No observable for `kind={kind!r}`, must be one of: {options}"
        )
    return ObservableClass(*args, **kwargs)
