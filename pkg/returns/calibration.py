import math
import os
from dataclasses import asdict, dataclass
from os import PathLike
from pathlib import Path

from errors import InvalidArgument
from utils.key_value import read_key_values, write_key_values

DEFAULT_CALIBRATION_PATH = Path("calibration.txt")
CALIBRATION_ENV = "HOROLAB_CALIBRATION"

# Keys of the calibration file, in the order they are written
FILE_KEYS = dict(
    c_gamma="C_Gamma",
    c_gamma_prime="C_Gamma_prime",
    seed="calibration-seed",
    date="date",
)


@dataclass(frozen=True)
class Calibration:
    """
    The frozen constants of the close-return bounds.

    c_gamma is the injectivity constant of the fundamental box, in (0, 1), and
    c_gamma_prime the constant of the degenerate return count.
    """

    c_gamma: float
    c_gamma_prime: float
    seed: int
    date: str

    def __post_init__(self):
        if not 0 < self.c_gamma < 1:
            raise InvalidArgument(
                f"Calibration requires 0 < C_Gamma < 1, got {self.c_gamma!r}"
            )
        if not (math.isfinite(self.c_gamma_prime) and self.c_gamma_prime > 0):
            raise InvalidArgument(
                f"Calibration requires C_Gamma_prime > 0, got {self.c_gamma_prime!r}"
            )

    def to_dict(self) -> dict:
        return asdict(self)


def calibration_path(option: str | PathLike | None = None) -> Path:
    """
    Location of the calibration file: the environment variable HOROLAB_CALIBRATION,
    then the given option (from the CLI) and finally calibration.txt in the working
    directory.
    """
    env = os.environ.get(CALIBRATION_ENV)
    if env:
        return Path(env)
    if option is not None:
        return Path(option)
    return DEFAULT_CALIBRATION_PATH


def save_calibration(calibration: Calibration, path: str | PathLike):
    values = calibration.to_dict()
    write_key_values(path, {FILE_KEYS[key]: values[key] for key in FILE_KEYS})


def load_calibration(path: str | PathLike) -> Calibration:
    raw = read_key_values(path)
    # Keys are stored normalised, e.g. calibration-seed as calibration_seed
    raw = {key.lower(): value for key, value in raw.items()}
    values = {}
    for field_name, file_key in FILE_KEYS.items():
        value = raw.get(file_key.lower().replace("-", "_"))
        if value is None:
            raise InvalidArgument(f"Calibration file {str(path)!r} misses {file_key!r}")
        values[field_name] = value
    try:
        return Calibration(
            c_gamma=float(values["c_gamma"]),
            c_gamma_prime=float(values["c_gamma_prime"]),
            seed=int(values["seed"]),
            date=values["date"],
        )
    except ValueError as e:
        if isinstance(e, InvalidArgument):
            raise
        raise InvalidArgument(f"Malformed calibration file {str(path)!r}: {e}") from e
