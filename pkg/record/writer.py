import csv
import hashlib
import json
import math
from os import PathLike
from pathlib import Path

type Value = float | int | str | bool | None


def format_value(value: Value) -> str:
    """
    Text of a value in a CSV cell. Floats use `repr`, which round-trips exactly and
    never depends on the locale, so reruns produce the same bytes.
    """
    match value:
        case None:
            return ""
        case bool():
            return "true" if value else "false"
        case float():
            return repr(value)
        case int() | str():
            return str(value)
        case _:
            raise TypeError(
                f"Cannot write value of type {type(value).__name__} to a CSV cell, "
                f"got {value!r}"
            )


def json_value(value: object) -> object:
    """
    JSON has no representation of inf and nan, they are written as the strings of
    their `repr`.
    """
    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)
    if isinstance(value, dict):
        return {key: json_value(v) for key, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [json_value(v) for v in value]
    return value


def columns_of(rows: list[dict[str, Value]]) -> list[str]:
    """
    Union of the columns of all rows, in the order they first appear.
    """
    columns: dict[str, None] = {}
    for row in rows:
        columns.update(dict.fromkeys(row))
    return list(columns)


def write_csv(
    path: str | PathLike,
    rows: list[dict[str, Value]],
    columns: list[str] | None = None,
):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if columns is None:
        columns = columns_of(rows)
    with open(path, "w", encoding="utf-8", newline="") as fd:
        writer = csv.writer(fd, delimiter=",", lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([format_value(row.get(column)) for column in columns])


def write_json(path: str | PathLike, data: object):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fd:
        json.dump(json_value(data), fd, indent=2, allow_nan=False)
        fd.write("\n")


def canonical_json(data: object) -> str:
    return json.dumps(
        json_value(data),
        sort_keys=True,
        separators=(",", ":"),
        ensure_ascii=True,
        allow_nan=False,
    )


def config_hash(config: dict) -> str:
    """
    SHA-256 of the canonical JSON of the config, independent of the key order.
    """
    return hashlib.sha256(canonical_json(config).encode("utf-8")).hexdigest()
