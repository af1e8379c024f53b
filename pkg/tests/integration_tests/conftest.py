"""Fixtures for integration tests."""
import pytest
import typer
import typer.testing

from stonework import _cli


@pytest.fixture(name="cli_app")
def cli_app_fixture() -> typer.Typer:
    """Return the typer app of the ``stonework`` command."""
    return _cli.app


@pytest.fixture(name="cli_runner")
def cli_runner_fixture() -> typer.testing.CliRunner:
    """Create CLI Test Runner."""
    return typer.testing.CliRunner(mix_stderr=True)
