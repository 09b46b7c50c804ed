import dataclasses
import re
import typing
from os import PathLike

from simple_parsing import Serializable

from errors import InvalidArgument
from utils.key_value import read_key_values

from .entry import create_parser

LIST_SEPARATOR = re.compile(r"[,\s]+")


def is_list_field(f: dataclasses.Field) -> bool:
    return typing.get_origin(f.type) is list


def to_argv(cls: type[Serializable], values: dict[str, str], source: str) -> list[str]:
    """
    Turn the raw values of a key=value file into command line arguments for the
    parameter dataclass, e.g. `taus = 1, 8, 64` into `--taus 1 8 64`.
    """
    fields = {f.name: f for f in dataclasses.fields(cls)}
    argv = []
    for key, value in values.items():
        f = fields.get(key)
        if f is None:
            options = ", ".join(fields)
            raise InvalidArgument(
                f"Unknown parameter {key!r} in {source}, must be one of: {options}"
            )
        argv.append(f"--{key.replace('_', '-')}")
        if is_list_field(f):
            argv.extend(item for item in LIST_SEPARATOR.split(value) if item)
        else:
            argv.append(value)
    return argv


def parse_params[T: Serializable](
    cls: type[T], values: dict[str, str], source: str = "<params>"
) -> T:
    """
    Convert the raw values into the parameter dataclass. The conversion is done by
    the argument parser of the dataclass, so the numbers are parsed the same way as
    on the command line, independent of the locale.

    Raises:
        InvalidArgument: For unknown keys or values that cannot be converted.
    """
    argv = to_argv(cls, values, source)
    parser = create_parser({"params": cls})
    try:
        params: T = parser.parse_args(argv).params
    except SystemExit as e:
        # argparse already printed the reason
        raise InvalidArgument(
            f"Invalid parameters in {source}: {' '.join(argv)}"
        ) from e
    return params


def read_params[T: Serializable](cls: type[T], path: str | PathLike | None) -> T:
    if path is None:
        return cls()
    return parse_params(cls, read_key_values(path), source=str(path))
