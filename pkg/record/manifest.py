from dataclasses import asdict, dataclass
from datetime import datetime, timezone
from pathlib import Path

from utils.key_value import file_hash

from .check import Check, all_passed
from .writer import Value, config_hash, write_csv, write_json


@dataclass
class Manifest:
    experiment: str
    # Echo of everything that determines the results: experiment, seed, parameters
    config: dict
    config_hash: str
    seed: int
    calibration: str | None
    # SHA-256 of the calibration file, None when there is none
    calibration_hash: str | None
    timestamp: str
    wall_time: float
    # The run stopped early at a resource limit, the rows are the ones produced before
    partial: bool
    passed: bool
    error: str | None = None

    def to_dict(self) -> dict:
        return asdict(self)


def create_manifest(
    experiment: str,
    config: dict,
    calibration: Path | None,
    wall_time: float,
    checks: list[Check],
    partial: bool = False,
    error: str | None = None,
) -> Manifest:
    return Manifest(
        experiment=experiment,
        config=config,
        config_hash=config_hash(config),
        seed=config["seed"],
        calibration=None if calibration is None else str(calibration),
        calibration_hash=None if calibration is None else file_hash(calibration),
        timestamp=datetime.now(timezone.utc).isoformat(timespec="seconds"),
        wall_time=wall_time,
        partial=partial,
        passed=not partial and error is None and all_passed(checks),
        error=error,
    )


def tag_rows(rows: list[dict[str, Value]], digest: str) -> list[dict[str, Value]]:
    """
    Prefix every row with the config hash of the run.
    """
    return [{"config_hash": digest, **row} for row in rows]


def write_results(
    out_dir: Path,
    manifest: Manifest,
    rows: list[dict[str, Value]],
    checks: list[Check],
):
    """
    Write results.csv/json, checks.csv/json and manifest.json into the directory.
    Only the manifest carries the time of the run.
    """
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = tag_rows(rows, manifest.config_hash)
    write_csv(out_dir / "results.csv", rows)
    write_json(out_dir / "results.json", rows)
    check_rows = tag_rows([check.to_dict() for check in checks], manifest.config_hash)
    write_csv(
        out_dir / "checks.csv",
        check_rows,
        columns=["config_hash", "name", "value", "relation", "bound", "passed"],
    )
    write_json(out_dir / "checks.json", check_rows)
    write_json(out_dir / "manifest.json", manifest.to_dict())
