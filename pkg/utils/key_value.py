import hashlib
from os import PathLike
from pathlib import Path

from errors import InvalidArgument


def normalise_key(key: str) -> str:
    """
    Keys accept both `-` and `_` as separator, e.g. `n-max` and `n_max` are the same.
    """
    return key.strip().replace("-", "_")


def parse_key_values(text: str, source: str = "<text>") -> dict[str, str]:
    """
    Parse a flat key=value file. Blank lines and lines starting with `#` are ignored,
    whitespace around keys and values is stripped.

    Args:
        text (str): Content of the file.
        source (str): Name used in error messages.

    Returns:
        values (dict[str, str]): The raw values by their normalised keys.
    """
    values: dict[str, str] = {}
    for line_number, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        key = normalise_key(key)
        if not sep or not key:
            raise InvalidArgument(
                f"Expected `key = value` in {source}:{line_number}, got {line!r}"
            )
        if key in values:
            raise InvalidArgument(f"Duplicate key {key!r} in {source}:{line_number}")
        values[key] = value.strip()
    return values


def read_key_values(path: str | PathLike) -> dict[str, str]:
    path = Path(path)
    if not path.is_file():
        raise InvalidArgument(f"Key-value file {str(path)!r} does not exist")
    return parse_key_values(path.read_text(encoding="utf-8"), source=str(path))


def write_key_values(path: str | PathLike, values: dict[str, object]):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"{key} = {value}" for key, value in values.items()]
    with open(path, "w", encoding="utf-8", newline="\n") as fd:
        fd.write("\n".join(lines) + "\n")


def file_hash(path: str | PathLike) -> str | None:
    """
    SHA-256 of the file content, None when there is no such file.
    """
    path = Path(path)
    if not path.is_file():
        return None
    return hashlib.sha256(path.read_bytes()).hexdigest()
