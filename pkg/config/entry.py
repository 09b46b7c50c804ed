from dataclasses import dataclass
from typing import Self, Sequence

from simple_parsing import (
    ArgumentGenerationMode,
    ArgumentParser,
    DashVariant,
    NestedMode,
    Serializable,
)
from simple_parsing.utils import Dataclass


def create_parser(
    configs: dict[str, type[Dataclass]], description: str | None = None
) -> ArgumentParser:
    """
    Create a parser with the given dataclasses added as arguments under the given names.

    Options are only generated with dashes, e.g. `--n-max` for the field `n_max`,
    which is also the form the keys of the parameter files are turned into.

    Args:
        configs (dict[str, Dataclass]): Dataclasses that define the arguments.
        description (str, optional): Description shown in the help.

    Returns:
        parser (ArgumentParser): The parser with the defined arguments.
    """
    parser = ArgumentParser(
        description=description,
        add_option_string_dash_variants=DashVariant.DASH,
        argument_generation_mode=ArgumentGenerationMode.BOTH,
        add_config_path_arg=False,
        nested_mode=NestedMode.WITHOUT_ROOT,
    )
    for name, config in configs.items():
        parser.add_arguments(config, dest=name)
    return parser


@dataclass
class ConfigEntry(Serializable):
    """
    Main config of a command line, which is parsed from the arguments and can be
    echoed to or loaded from a file.
    """

    @classmethod
    def create_parser(cls: type[Self], dest: str = "config") -> ArgumentParser:
        return create_parser({dest: cls}, description=cls.__doc__)

    @classmethod
    def parse_config(cls: type[Self], args: Sequence[str] | None = None) -> Self:
        """
        Parse the arguments into the config.

        Args:
            args (Sequence[str], optional): Arguments to parse, by default the ones
                of the command line.

        Returns:
            cfg (Self): The parsed config.
        """
        parser = cls.create_parser(dest="config")
        cfg: Self = parser.parse_args(args).config
        return cfg
