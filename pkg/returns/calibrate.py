import math
from dataclasses import asdict, dataclass
from datetime import date
from os import PathLike
from pathlib import Path

from errors import InvalidArgument, LabError, ResourceLimit
from surface import SurfacePoint, height_distance, sample_points

from .bounds import degenerate_count_bound, select_events
from .calibration import Calibration, load_calibration, save_calibration
from .detection import find_beta_returns, max_beta, return_step
from .injectivity import InjectivityGrid, injectivity_scale, injectivity_search

# Fraction of the smallest observed injectivity scale kept as C_Gamma.
CALIBRATION_MARGIN = 0.9
# Points with d_M at most this lie in the thick part, Im <= 2.
THICK_HEIGHT = math.log(2)
# Candidate draws per requested thick point.
OVERSAMPLING = 4


@dataclass
class CalibrationPoint:
    seed: int
    index: int
    d_m: float
    injectivity_scale: float
    c: float
    degenerate_ratio: float

    def to_dict(self) -> dict:
        return asdict(self)


def thick_points(seed: int, count: int) -> list[SurfacePoint]:
    """
    The first `count` sampled points of the seed that lie in the thick part.
    """
    if count < 1:
        raise InvalidArgument(f"thick_points requires count >= 1, got count={count}")
    candidates = sample_points(seed, OVERSAMPLING * count)
    points = [x for x in candidates if height_distance(x) <= THICK_HEIGHT]
    if len(points) < count:
        raise ResourceLimit(
            f"Only {len(points)} of {len(candidates)} samples of seed={seed} lie in "
            f"the thick part, {count} are required"
        )
    return points[:count]


def degenerate_ratio(x: SurfacePoint, scale: float, T: float, c: float) -> float:
    """
    Largest ratio of the degenerate return count to 1 + e^{-β} 𝒯^{1/3} T over the
    shells.
    """
    events = find_beta_returns(x, scale, T, return_step(scale, c), c=c)
    return max(
        len(select_events(events, beta, degenerate=True))
        / degenerate_count_bound(beta, scale, T, 1.0)
        for beta in range(max_beta(scale, T) + 1)
    )


def calibration_point(
    x: SurfacePoint,
    seed: int,
    index: int,
    grid: InjectivityGrid = InjectivityGrid(),
    scale: float = 1.0,
    T: float = 10.0,
) -> CalibrationPoint:
    c = injectivity_search(x, scale * T, grid)
    return CalibrationPoint(
        seed=seed,
        index=index,
        d_m=height_distance(x),
        injectivity_scale=injectivity_scale(x, grid),
        c=c,
        degenerate_ratio=degenerate_ratio(x, scale, T, c),
    )


def fit_calibration(observations: list[CalibrationPoint], seed: int) -> Calibration:
    """
    C_Γ is 0.9 times the smallest injectivity scale r(x) e^{d_M(x)} observed (capped
    at 1), C'_Γ the largest ratio of degenerate returns to 1 + e^{-β} 𝒯^{1/3} T
    observed, at least 1.
    """
    if len(observations) == 0:
        raise InvalidArgument("Calibration requires at least one observation")
    smallest = min(o.injectivity_scale for o in observations)
    return Calibration(
        c_gamma=CALIBRATION_MARGIN * min(smallest, 1.0),
        c_gamma_prime=max(1.0, max(o.degenerate_ratio for o in observations)),
        seed=seed,
        date=date.today().isoformat(),
    )


def calibrate(
    seed: int = 0,
    points: int = 20,
    grid: InjectivityGrid = InjectivityGrid(),
    scale: float = 1.0,
    T: float = 10.0,
) -> tuple[Calibration, list[CalibrationPoint]]:
    """
    Fit the constants of the close-return bounds on thick points of the seed, with
    the degenerate returns counted at (𝒯, T).

    Returns:
        calibration (Calibration): The fitted constants.
        observations (list[CalibrationPoint]): The measurement of every point.
    """
    observations = [
        calibration_point(x, seed, index, grid, scale, T)
        for index, x in enumerate(thick_points(seed, points))
    ]
    return fit_calibration(observations, seed), observations


def store_calibration(calibration: Calibration, path: str | PathLike) -> bool:
    """
    Write the calibration unless the file already holds the same constants for the
    same seed, in which case it is left untouched with its original date.

    Returns:
        written (bool): Whether the file was (re)written.
    """
    path = Path(path)
    if path.exists():
        try:
            existing = load_calibration(path)
        except LabError:
            existing = None
        if existing is not None and (
            existing.seed == calibration.seed
            and existing.c_gamma == calibration.c_gamma
            and existing.c_gamma_prime == calibration.c_gamma_prime
        ):
            return False
    save_calibration(calibration, path)
    return True
