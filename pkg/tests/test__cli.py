"""Tests for ``_cli`` module.

The commands themselves are exercised in the ``integration_tests`` directory.
"""
import enum
import typing as t

import pytest
import typer

from stonework import _cli


@pytest.mark.parametrize("level", ["SEVERE", "NONE"])
def test_setup_logger_errors_on_invalid_levels(level: str) -> None:
    """Tests exception is raised on invalid levels."""
    with pytest.raises(ValueError, match=f"Invalid log level: {level}"):
        _cli.setup_logger(level)


@pytest.mark.parametrize("level", ["debug", "InFO", "WARNING", "ErRor", "critical"])
def test_setup_logger_valid_levels(level: str) -> None:
    """Test no execption is raised on valid levels."""
    _cli.setup_logger(level)  # act


@pytest.mark.parametrize(
    ("choices", "values"),
    [
        (_cli.DualTarget, _cli.runner.DUAL_TARGETS),
        (_cli.MorphismAction, _cli.runner.MORPHISM_ACTIONS),
    ],
)
def test_choices_match_runner(choices: t.Type[enum.Enum], values: t.Tuple[str, ...]) -> None:
    """Test the CLI choices are the values the runner dispatches on."""
    assert tuple(member.value for member in choices) == values


def test_every_runner_command_is_registered() -> None:
    """Test each runner command has a CLI command of the same name."""
    names = set(_cli.typer_click_object.commands)  # type: ignore[attr-defined]

    assert names == set(_cli.runner.COMMANDS)


class TestCliState:
    """Test settings given before and after the subcommand."""

    @staticmethod
    def test_command_value_wins() -> None:
        """Test the subcommand's cap replaces the global one."""
        state = _cli.CliState(explicit={"cap": 8, "seed": 2})

        settings = state.settings({"cap": 3, "seed": None})

        assert settings.cap == 3
        assert settings.seed == 2

    @staticmethod
    def test_file_values_fill_the_rest() -> None:
        """Test config file values apply where no option is given."""
        state = _cli.CliState(explicit={}, file_values={"cap": 5, "search_budget": 7})

        settings = state.settings({"cap": 9})

        assert settings.cap == 9
        assert settings.search_budget == 7


@pytest.mark.parametrize(
    ("values", "pairs"),
    [(None, []), (["0,1"], [("0", "1")]), (["a, b", "b,b"], [("a", "b"), ("b", "b")])],
)
def test_parse_pairs(values: t.Optional[t.List[str]], pairs: t.List[t.Tuple[str, str]]) -> None:
    """Test ``A,B`` values become id pairs."""
    assert _cli.parse_pairs(values) == pairs


def test_parse_pairs_rejects_values_without_comma() -> None:
    """Test a value that is not a pair."""
    with pytest.raises(typer.BadParameter, match="expected 'A,B'"):
        _cli.parse_pairs(["0-1"])
