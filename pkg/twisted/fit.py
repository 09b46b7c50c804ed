import math
from dataclasses import asdict, dataclass
from typing import Sequence

import torch

from errors import InvalidArgument

MIN_SAMPLES = 4


@dataclass
class ExponentFit:
    slope: float
    intercept: float
    # Largest absolute residual of the fit in log space
    residual_max: float
    samples: int

    def to_dict(self) -> dict:
        return asdict(self)

    def predict(self, T: float) -> float:
        return math.exp(self.intercept) * T**self.slope


def exponent_fit(samples: Sequence[tuple[float, float]]) -> ExponentFit:
    """
    Least squares fit of log|I| = slope·log T + intercept.

    Args:
        samples (Sequence[tuple[float, float]]): Pairs (T, |I|), at least 4.

    Returns:
        fit (ExponentFit): Slope, intercept and the largest residual.
    """
    if len(samples) < MIN_SAMPLES:
        raise InvalidArgument(
            f"Exponent fit requires at least {MIN_SAMPLES} samples, got {len(samples)}"
        )
    data = torch.tensor(samples, dtype=torch.float64)
    if not torch.all(data > 0):
        raise InvalidArgument(
            f"Exponent fit requires positive T and |I|, got {samples!r}"
        )
    log_t, log_i = torch.log(data[:, 0]), torch.log(data[:, 1])
    design = torch.stack([log_t, torch.ones_like(log_t)], dim=-1)
    solution = torch.linalg.lstsq(design, log_i.unsqueeze(-1)).solution.squeeze(-1)
    slope, intercept = solution.tolist()
    residuals = log_i - design @ solution
    return ExponentFit(
        slope=slope,
        intercept=intercept,
        residual_max=residuals.abs().max().item(),
        samples=len(samples),
    )
