import math
from dataclasses import asdict, dataclass
from typing import Sequence

import torch

from errors import InvalidArgument

from .calibration import Calibration
from .detection import ReturnEvent, max_beta


def select_events(
    events: Sequence[ReturnEvent], beta: int, degenerate: bool = False
) -> list[ReturnEvent]:
    return [e for e in events if e.beta == beta and e.degenerate == degenerate]


def separation_threshold(beta: int, scale: float, c_gamma: float) -> float:
    return math.exp(beta) * scale ** (-1 / 3) / (2 * c_gamma)


@dataclass
class SeparationReport:
    beta: int
    passed: bool
    # Smallest max(|t0 - t0'|, |t1 - t1'|) over distinct pairs, inf for fewer than two
    min_gap: float
    threshold: float
    events: int

    def to_dict(self) -> dict:
        return asdict(self)


def separation_check(
    events: Sequence[ReturnEvent],
    beta: int,
    scale: float,
    calibration: Calibration,
) -> SeparationReport:
    """
    Distinct non-degenerate returns of the same β differ by at least
    e^β 𝒯^{-1/3} / (2 C_Γ) in t0 or in t1.
    """
    for event in events:
        if event.beta != beta or event.degenerate:
            raise InvalidArgument(
                f"Separation check requires non-degenerate returns with beta={beta}, "
                f"got {event}"
            )
    threshold = separation_threshold(beta, scale, calibration.c_gamma)
    if len(events) < 2:
        return SeparationReport(
            beta=beta,
            passed=True,
            min_gap=math.inf,
            threshold=threshold,
            events=len(events),
        )
    times = torch.tensor([[e.t0, e.t1] for e in events], dtype=torch.float64)
    gaps = torch.cdist(times, times, p=math.inf)
    i, j = torch.triu_indices(len(events), len(events), offset=1)
    min_gap = gaps[i, j].min().item()
    return SeparationReport(
        beta=beta,
        passed=min_gap >= threshold,
        min_gap=min_gap,
        threshold=threshold,
        events=len(events),
    )


def count_bound(beta: int, scale: float, T: float, c_gamma: float) -> float:
    return 4e2 * c_gamma**2 * math.exp(-2 * beta) * scale ** (2 / 3) * T**2


def degenerate_count_bound(
    beta: int, scale: float, T: float, c_gamma_prime: float
) -> float:
    return c_gamma_prime * (1 + math.exp(-beta) * scale ** (1 / 3) * T)


@dataclass
class CountReport:
    beta: int
    count: int
    bound: float
    passed: bool
    degenerate_count: int
    degenerate_bound: float
    degenerate_passed: bool

    def to_dict(self) -> dict:
        return asdict(self)


def count_bound_check(
    events: Sequence[ReturnEvent],
    scale: float,
    T: float,
    calibration: Calibration,
) -> list[CountReport]:
    """
    Per shell β = 0, ..., ⌊log(𝒯^{1/3} T)⌋ the number of non-degenerate returns
    against 4·10² C_Γ² e^{-2β} 𝒯^{2/3} T² and the number of degenerate ones against
    C'_Γ (1 + e^{-β} 𝒯^{1/3} T).
    """
    reports = []
    for beta in range(max_beta(scale, T) + 1):
        count = len(select_events(events, beta))
        degenerate_count = len(select_events(events, beta, degenerate=True))
        bound = count_bound(beta, scale, T, calibration.c_gamma)
        degenerate_bound = degenerate_count_bound(
            beta, scale, T, calibration.c_gamma_prime
        )
        reports.append(
            CountReport(
                beta=beta,
                count=count,
                bound=bound,
                passed=count <= bound,
                degenerate_count=degenerate_count,
                degenerate_bound=degenerate_bound,
                degenerate_passed=degenerate_count <= degenerate_bound,
            )
        )
    return reports
