"""Stonework configuration.

Values come from CLI options, ``STONEWORK_*`` environment variables and config files, in this
order of precedence.
"""
import configparser
import enum
import logging
import pathlib
import typing as t

import pydantic

from . import _extras


if _extras.TOMLI_INSTALLED:  # pragma: no cover
    import tomli


logger = logging.getLogger(__name__)

CONFIG_FILES = [".stonework.cfg", "setup.cfg"]
if _extras.TOMLI_INSTALLED:  # pragma: no cover
    CONFIG_FILES = [".stonework.cfg", "pyproject.toml", "setup.cfg"]

DEFAULT_CARRIER_CAP = 64
DEFAULT_ORACLE_CAP = 15
DEFAULT_MINIMALITY_CAP = 6
DEFAULT_SEARCH_SIZE = 5


class OutputFormat(str, enum.Enum):
    """Report formats of the CLI."""

    JSON = "json"
    TABLE = "table"


class StoneworkConfig(pydantic.BaseSettings):  # pylint: disable=too-few-public-methods
    """Settings shared by every command.

    :param cap: Largest admissible carrier.
    :param oracle_cap: Largest carrier for subset-enumeration oracles.
    :param minimality_cap: Largest carrier for the auxiliary-relation enumeration.
    :param search_size: Largest carrier enumerated exhaustively by the searcher.
    :param search_budget: Number of random draws of the searcher.
    :param seed: Seed of every randomized procedure.
    :param oracle: Run subset oracles in addition to the fast paths.
    :param output_format: Report format.
    :raises ValueError: If a cap is not positive.
    """

    cap: int = DEFAULT_CARRIER_CAP
    oracle_cap: int = DEFAULT_ORACLE_CAP
    minimality_cap: int = DEFAULT_MINIMALITY_CAP
    search_size: int = DEFAULT_SEARCH_SIZE
    search_budget: int = 200
    seed: int = 0
    oracle: bool = False
    output_format: OutputFormat = OutputFormat.JSON

    class Config:  # pylint: disable=too-few-public-methods
        env_prefix = "STONEWORK_"

    @pydantic.validator(
        "cap", "oracle_cap", "minimality_cap", "search_size", "search_budget", pre=True
    )
    @classmethod
    def positive(cls, value: t.Any) -> int:  # noqa: N805
        """Reject non-positive caps.

        :raises ValueError: On values below one.
        """
        number = int(value)
        if number < 1:
            raise ValueError(f"must be a positive integer, got {value!r}")
        return number

    @pydantic.validator("oracle_cap")
    @classmethod
    def oracle_within_cap(cls, value: int, values: t.Dict[str, t.Any]) -> int:  # noqa: N805
        """Clamp the oracle cap to the carrier cap."""
        return min(value, values.get("cap", DEFAULT_CARRIER_CAP))


class RunConfig(pydantic.BaseModel):  # pylint: disable=too-few-public-methods
    """One CLI invocation.

    :param command: Name of the command to run.
    :param inputs: Structure files.
    :param fixture: Built-in fixture name, alternative to ``inputs``.
    :param arguments: Command specific arguments.
    :param settings: Shared settings.
    """

    command: str
    inputs: t.List[pathlib.Path] = []
    fixture: t.Optional[str] = None
    arguments: t.Dict[str, t.Any] = {}
    settings: StoneworkConfig = pydantic.Field(default_factory=StoneworkConfig)


def default_cap() -> int:
    """The carrier cap from the environment or the built-in default."""
    return StoneworkConfig().cap


def _filter_known(
    section: t.Mapping[str, t.Any], source: pathlib.Path, *, warn_unknown_settings: bool
) -> t.Dict[str, t.Any]:
    known = {k: v for k, v in section.items() if k in StoneworkConfig.__fields__}
    if warn_unknown_settings:
        for key in section:
            if key not in known:
                logger.warning(f"Unknown setting found in config file: '{key}' in '{source}'.")
    return known


def load_config_file_from_ini(
    ini_file: pathlib.Path, *, warn_unknown_settings: bool = False
) -> t.Optional[t.Dict[str, t.Any]]:
    """Load the ``[stonework]`` section of an INI file.

    :param ini_file: INI file to load.
    :param warn_unknown_settings: Log a warning for unknown keys.
    :raises FileNotFoundError: If the file is not found.
    :return: The known settings or ``None`` if the section is missing.
    """
    logger.debug(f"Try loading config from INI file: '{ini_file}'")
    resolved_file = ini_file.resolve()
    if not resolved_file.is_file():
        logger.error(f"Config file is not a file: '{ini_file}'.")
        raise FileNotFoundError(2, "Passed config file not found.", ini_file)

    parser = configparser.ConfigParser()
    parser.read(resolved_file)
    if not parser.has_section("stonework"):
        logger.info(f"Config file has no [stonework] section: '{ini_file}'.")
        return None
    return _filter_known(
        dict(parser.items("stonework")), ini_file, warn_unknown_settings=warn_unknown_settings
    )


def load_config_file_from_toml(
    toml_file: pathlib.Path, *, warn_unknown_settings: bool = False
) -> t.Optional[t.Dict[str, t.Any]]:
    """Load the ``[tool.stonework]`` table of a TOML file.

    :param toml_file: TOML file to load.
    :param warn_unknown_settings: Log a warning for unknown keys.
    :raises ModuleNotFoundError: If ``tomli`` is not installed.
    :raises FileNotFoundError: If the file is not found.
    :return: The known settings or ``None`` if the table is missing.
    """
    _extras.install_guard("tomli")
    logger.debug(f"Try loading config from TOML file: '{toml_file}'")
    resolved_file = toml_file.resolve()
    if not resolved_file.is_file():
        logger.error(f"Config file is not a file: '{toml_file}'.")
        raise FileNotFoundError(2, "Passed config file not found.", toml_file)

    with open(resolved_file, "rb") as toml_file_handle:
        toml_dict = tomli.load(toml_file_handle)

    section = toml_dict.get("tool", {}).get("stonework")
    if section is None:
        logger.info(f"Config file has no [tool.stonework] section: '{toml_file}'.")
        return None
    return _filter_known(section, toml_file, warn_unknown_settings=warn_unknown_settings)


def load_config_file(
    file_path: pathlib.Path, *, warn_unknown_settings: bool = False
) -> t.Optional[t.Dict[str, t.Any]]:
    """Load a config file, choosing the reader by suffix."""
    if file_path.suffix.casefold() == ".toml":
        return load_config_file_from_toml(file_path, warn_unknown_settings=warn_unknown_settings)
    return load_config_file_from_ini(file_path, warn_unknown_settings=warn_unknown_settings)


def load_config_file_from_dir(
    dir_path: pathlib.Path, *, warn_unknown_settings: bool = False
) -> t.Optional[t.Dict[str, t.Any]]:
    """Search a directory for the first supported config file with a stonework section."""
    for name in CONFIG_FILES:
        candidate = dir_path / name
        if not candidate.is_file():
            continue
        values = load_config_file(candidate, warn_unknown_settings=warn_unknown_settings)
        if values is not None:
            logger.info(f"Using config file: '{candidate}'.")
            return values
    logger.info(f"No config file with a stonework section found in '{dir_path}'.")
    return None


def load_config_file_from_path(
    path: pathlib.Path, *, warn_unknown_settings: bool = False
) -> t.Optional[t.Dict[str, t.Any]]:
    """Load config from a file or a directory.

    ``NONE`` (any case) disables loading.

    :raises FileNotFoundError: If the path does not exist.
    """
    if path.name.casefold() == "none":
        logger.info("Config path is set to 'NONE'. No config file is loaded.")
        return None
    resolved_path = path.resolve()
    if resolved_path.is_dir():
        return load_config_file_from_dir(path, warn_unknown_settings=warn_unknown_settings)
    if resolved_path.is_file():
        return load_config_file(path, warn_unknown_settings=warn_unknown_settings)
    logger.error(f"Passed config path not found: '{path}'.")
    raise FileNotFoundError(2, "Passed config path not found.", path)


def merge_configs(
    explicit: t.Mapping[str, t.Any], file_values: t.Optional[t.Mapping[str, t.Any]]
) -> StoneworkConfig:
    """Combine CLI values, environment and config file.

    :param explicit: Values given on the command line; ``None`` entries are ignored.
    :param file_values: Values read from a config file.
    :return: The merged settings; CLI beats environment beats file beats default.
    """
    given = {k: v for k, v in explicit.items() if v is not None}
    env_and_cli = StoneworkConfig(**given)
    fixed = {k: getattr(env_and_cli, k) for k in env_and_cli.__fields_set__}
    from_file = {k: v for k, v in (file_values or {}).items() if k not in fixed}
    return StoneworkConfig(**{**from_file, **fixed})
