"""Detection of optional dependencies."""
import importlib
import logging
import typing as t


logger = logging.getLogger(__name__)

ExtraDependencies = t.Literal["tomli"]
"""List of all dependencies installable through extras."""

TOMLI_INSTALLED = False
try:
    importlib.import_module("tomli")

    TOMLI_INSTALLED = True
except ImportError:
    logger.debug("tomli not installed, TOML config files are disabled.")


def is_installed_with_supported_version(package: ExtraDependencies) -> bool:
    """Check if the package is installed.

    :param package: Package to check.
    :return: Whether the package is importable.
    """
    if package == "tomli":
        return TOMLI_INSTALLED
    return False  # pragma: no cover


def install_guard(package: ExtraDependencies) -> None:
    """Guard code that needs the ``package`` installed and throw :py:exc:`ModuleNotFoundError`.

    :param package: Package to guard.
    :raises ModuleNotFoundError: When the package is not installed.
    """
    if is_installed_with_supported_version(package):
        return
    raise ModuleNotFoundError(
        f"No supported version of {package} installed. "
        "Install stonework with the toml extra (stonework[toml]) or install a supported "
        f"version of {package} yourself."
    )
