"""Integration test for the CLI."""
import json
import pathlib
import typing as t

import pytest
import typer
import typer.testing

from stonework import _extras
from tests.conftest import EXAMPLES_DIR


CONFIG_DIR = EXAMPLES_DIR / "with_configuration"
GOOD_FILES = sorted((EXAMPLES_DIR / "good").glob("*.json"))
BAD_FILES = sorted((EXAMPLES_DIR / "bad").glob("*.json"))


def _report(result: t.Any) -> t.Dict[str, t.Any]:
    return t.cast(t.Dict[str, t.Any], json.loads(result.stdout))


def test_exit_2_on_nonexisting_config_path(
    cli_app: typer.Typer, cli_runner: typer.testing.CliRunner, caplog: pytest.LogCaptureFixture
) -> None:
    """Test runner exits with error on non existing config path."""
    config_file = pathlib.Path("does-not-exist")

    result = cli_runner.invoke(cli_app, ["--config", str(config_file), "fixtures"])

    assert result.exit_code == 2
    assert "Passed config path was not found" in caplog.text


class TestHelpMessage:
    """Test help CLI messages."""

    @staticmethod
    def test_cli_version_message(cli_app: typer.Typer, cli_runner: typer.testing.CliRunner) -> None:
        """Test version message."""
        result = cli_runner.invoke(cli_app, "--version")

        assert result.exit_code == 0
        assert "stonework Version:" in result.stdout

    @staticmethod
    def test_cli_help_message(cli_app: typer.Typer, cli_runner: typer.testing.CliRunner) -> None:
        """Test help message lists the commands."""
        result = cli_runner.invoke(cli_app, "--help")

        assert result.exit_code == 0
        assert "Finite-model lab" in result.stdout
        assert "roundtrip" in result.stdout
        assert "lenz-product" in result.stdout

    @staticmethod
    @pytest.mark.skipif(not _extras.TOMLI_INSTALLED, reason="Depends on toml extra.")
    def test_cli_help_message_with_tomli(
        cli_app: typer.Typer, cli_runner: typer.testing.CliRunner
    ) -> None:
        """Test help message when toml is installed."""
        result = cli_runner.invoke(cli_app, "--help")

        assert result.exit_code == 0
        assert "pyproject.toml" in result.stdout


class TestInput:
    """Test file and fixture input."""

    @staticmethod
    @pytest.mark.parametrize("test_file", GOOD_FILES, ids=lambda p: p.name)
    def test_good_example(
        cli_app: typer.Typer, cli_runner: typer.testing.CliRunner, test_file: pathlib.Path
    ) -> None:
        """Test every good example validates."""
        result = cli_runner.invoke(cli_app, ["validate", "--input", str(test_file)])

        assert result.exit_code == 0
        assert _report(result)["passed"] is True

    @staticmethod
    @pytest.mark.parametrize("test_file", BAD_FILES, ids=lambda p: p.name)
    def test_bad_example(
        cli_app: typer.Typer,
        cli_runner: typer.testing.CliRunner,
        caplog: pytest.LogCaptureFixture,
        test_file: pathlib.Path,
    ) -> None:
        """Test every bad example is rejected as input error."""
        result = cli_runner.invoke(cli_app, ["validate", "--input", str(test_file)])

        assert result.exit_code == 2
        assert "###" in caplog.text

    @staticmethod
    def test_missing_input(
        cli_app: typer.Typer, cli_runner: typer.testing.CliRunner, caplog: pytest.LogCaptureFixture
    ) -> None:
        """Test a command without input or fixture."""
        result = cli_runner.invoke(cli_app, ["classify"])

        assert result.exit_code == 2
        assert "needs --input or --fixture" in caplog.text

    @staticmethod
    def test_unknown_fixture(
        cli_app: typer.Typer, cli_runner: typer.testing.CliRunner, caplog: pytest.LogCaptureFixture
    ) -> None:
        """Test an unknown fixture name."""
        result = cli_runner.invoke(cli_app, ["validate", "--fixture", "Q(2)"])

        assert result.exit_code == 2
        assert "UnknownFixture" in caplog.text

    @staticmethod
    def test_fixture_form(cli_app: typer.Typer, cli_runner: typer.testing.CliRunner) -> None:
        """Test ``--as`` selects the form of a fixture."""
        result = cli_runner.invoke(cli_app, ["validate", "--fixture", "B(2)", "--as", "space"])

        assert result.exit_code == 0
        assert _report(result)["result"]["kind"] == "space"


class TestCommands:
    """Test the commands on fixtures."""

    @staticmethod
    def test_classify(cli_app: typer.Typer, cli_runner: typer.testing.CliRunner) -> None:
        """Test ``B(2)`` is Boolean."""
        result = cli_runner.invoke(cli_app, ["classify", "--fixture", "B(2)"])

        assert result.exit_code == 0
        assert _report(result)["result"]["flags"]["boolean"] is True

    @staticmethod
    def test_axioms(cli_app: typer.Typer, cli_runner: typer.testing.CliRunner) -> None:
        """Test a failing axiom still exits zero."""
        result = cli_runner.invoke(
            cli_app, ["axioms", "--fixture", "C(3)", "--axiom", "prec_round_nonzero"]
        )

        assert result.exit_code == 0
        assert _report(result)["result"]["prec_round_nonzero"]["holds"] is False

    @staticmethod
    def test_axioms_against_the_order(
        cli_app: typer.Typer, cli_runner: typer.testing.CliRunner
    ) -> None:
        """Test ``--auxiliary-leq`` checks the axiom against ``<=``."""
        result = cli_runner.invoke(
            cli_app,
            ["axioms", "--fixture", "C(3)", "--axiom", "prec_round_nonzero", "--auxiliary-leq"],
        )

        assert result.exit_code == 0
        assert _report(result)["result"]["prec_round_nonzero"]["holds"] is True

    @staticmethod
    def test_axioms_against_given_pairs(
        cli_app: typer.Typer, cli_runner: typer.testing.CliRunner
    ) -> None:
        """Test ``--auxiliary`` pairs form the relation."""
        pairs = ["0,0", "0,1", "0,2", "1,1", "1,2", "2,2"]
        args = ["axioms", "--fixture", "C(3)", "--axiom", "interpolation"]
        for pair in pairs:
            args += ["--auxiliary", pair]

        result = cli_runner.invoke(cli_app, args)

        assert result.exit_code == 0
        assert _report(result)["result"]["interpolation"]["holds"] is True

    @staticmethod
    def test_axioms_with_malformed_pair(
        cli_app: typer.Typer, cli_runner: typer.testing.CliRunner
    ) -> None:
        """Test a pair without a comma is a usage error."""
        result = cli_runner.invoke(cli_app, ["axioms", "--fixture", "C(3)", "--auxiliary", "0-1"])

        assert result.exit_code == 2
        assert "expected 'A,B'" in result.stdout

    @staticmethod
    def test_relation(cli_app: typer.Typer, cli_runner: typer.testing.CliRunner) -> None:
        """Test the ≺ pairs of the chain."""
        result = cli_runner.invoke(cli_app, ["relation", "--fixture", "C(3)", "--kind", "prec"])

        assert result.exit_code == 0
        assert ["1", "1"] not in _report(result)["result"]["pairs"]

    @staticmethod
    def test_ultrafilters(cli_app: typer.Typer, cli_runner: typer.testing.CliRunner) -> None:
        """Test the ultrafilters of ``B(2)``."""
        result = cli_runner.invoke(cli_app, ["--oracle", "ultrafilters", "--fixture", "B(2)"])

        assert result.exit_code == 0
        assert set(_report(result)["result"]["ultrafilters"]) == {"U_{1}", "U_{2}"}

    @staticmethod
    def test_dualize_semigroup(cli_app: typer.Typer, cli_runner: typer.testing.CliRunner) -> None:
        """Test the ultrafilter groupoid of ``I(2)``."""
        result = cli_runner.invoke(cli_app, ["dualize", "semigroup", "--fixture", "I2"])

        assert result.exit_code == 0
        assert len(_report(result)["result"]["groupoid"]["arrows"]) == 4

    @staticmethod
    def test_dualize_not_basic(
        cli_app: typer.Typer, cli_runner: typer.testing.CliRunner, caplog: pytest.LogCaptureFixture
    ) -> None:
        """Test a precondition failure is an input error."""
        result = cli_runner.invoke(cli_app, ["dualize", "poset", "--fixture", "C(3)"])

        assert result.exit_code == 2
        assert "NotBasic" in caplog.text

    @staticmethod
    @pytest.mark.parametrize("fixture", ["I2", "B(2)", "pair(2)"])
    def test_roundtrip(
        cli_app: typer.Typer, cli_runner: typer.testing.CliRunner, fixture: str
    ) -> None:
        """Test round trips of semigroups, posets and groupoids."""
        result = cli_runner.invoke(cli_app, ["roundtrip", "--fixture", fixture])

        assert result.exit_code == 0
        assert _report(result)["result"]["isomorphic"] is True

    @staticmethod
    def test_lenz_product(cli_app: typer.Typer, cli_runner: typer.testing.CliRunner) -> None:
        """Test the product of two principal filters."""
        result = cli_runner.invoke(
            cli_app, ["lenz-product", "--fixture", "I2", "--left", "12", "--right", "21"]
        )

        assert result.exit_code == 0
        assert _report(result)["result"]["product"] == ["11", "11,22"]

    @staticmethod
    def test_sg_action(cli_app: typer.Typer, cli_runner: typer.testing.CliRunner) -> None:
        """Test ``12`` moves ``U_21`` to ``U_11``."""
        result = cli_runner.invoke(
            cli_app, ["sg-action", "--fixture", "I2", "--element", "12", "--ultrafilter", "U_21"]
        )

        assert result.exit_code == 0
        assert _report(result)["result"][0]["image"] == "U_11"

    @staticmethod
    def test_morphism_compose(cli_app: typer.Typer, cli_runner: typer.testing.CliRunner) -> None:
        """Test composing two morphism files."""
        identity = str(EXAMPLES_DIR / "good" / "morphism_identity_b2.json")

        result = cli_runner.invoke(
            cli_app, ["morphism", "compose", "--input", identity, "--input", identity, "--close"]
        )

        assert result.exit_code == 0
        assert _report(result)["result"]["is_basic"] is True

    @staticmethod
    def test_morphism_from_map(cli_app: typer.Typer, cli_runner: typer.testing.CliRunner) -> None:
        """Test a partial map becomes a morphism."""
        swap = str(EXAMPLES_DIR / "good" / "partial_map_swap.json")

        result = cli_runner.invoke(cli_app, ["morphism", "from-map", "--input", swap])

        assert result.exit_code == 0
        assert _report(result)["result"]["kind"] == "morphism"

    @staticmethod
    def test_fixtures(cli_app: typer.Typer, cli_runner: typer.testing.CliRunner) -> None:
        """Test the catalogue."""
        result = cli_runner.invoke(cli_app, ["fixtures"])

        assert result.exit_code == 0
        assert "pair(n)" in [entry["name"] for entry in _report(result)["result"]]

    @staticmethod
    def test_search_is_reproducible(
        cli_app: typer.Typer, cli_runner: typer.testing.CliRunner
    ) -> None:
        """Test the same seed gives the same report."""
        args = ["--seed", "3", "search", "--holds", "boolean", "--fails", "basic_poset"]
        args += ["--size", "2", "--budget", "5"]

        first = cli_runner.invoke(cli_app, args)
        second = cli_runner.invoke(cli_app, args)

        assert first.exit_code == 0
        assert first.stdout == second.stdout
        assert _report(first)["result"]["message"] == "none found up to cap"

    @staticmethod
    def test_search_unknown_property(
        cli_app: typer.Typer, cli_runner: typer.testing.CliRunner, caplog: pytest.LogCaptureFixture
    ) -> None:
        """Test an unknown property name."""
        result = cli_runner.invoke(cli_app, ["search", "--holds", "boolean", "--fails", "shiny"])

        assert result.exit_code == 2
        assert "UnknownAxiom" in caplog.text

    @staticmethod
    def test_table_format(cli_app: typer.Typer, cli_runner: typer.testing.CliRunner) -> None:
        """Test the table report."""
        result = cli_runner.invoke(cli_app, ["--format", "table", "classify", "--fixture", "B(1)"])

        assert result.exit_code == 0
        assert "result.flags.boolean" in result.stdout
        assert not result.stdout.startswith("{")


class TestWithConfigFile:
    """Test settings from config files and environment."""

    @staticmethod
    def test_cap_from_config_dir(
        cli_app: typer.Typer, cli_runner: typer.testing.CliRunner, caplog: pytest.LogCaptureFixture
    ) -> None:
        """Test ``.stonework.cfg`` in a directory lowers the cap."""
        test_file = CONFIG_DIR / "poset_b2.json"

        result = cli_runner.invoke(
            cli_app, ["--config", str(CONFIG_DIR), "validate", "--input", str(test_file)]
        )

        assert result.exit_code == 2
        assert "CarrierTooLarge" in caplog.text

    @staticmethod
    def test_cli_beats_config_file(
        cli_app: typer.Typer, cli_runner: typer.testing.CliRunner
    ) -> None:
        """Test ``--cap`` overrides the file."""
        test_file = CONFIG_DIR / "poset_b2.json"

        result = cli_runner.invoke(
            cli_app,
            ["--config", str(CONFIG_DIR), "--cap", "8", "validate", "--input", str(test_file)],
        )

        assert result.exit_code == 0

    @staticmethod
    def test_settings_after_the_command(
        cli_app: typer.Typer, cli_runner: typer.testing.CliRunner
    ) -> None:
        """Test ``--cap`` and ``--format`` given after the command override the file."""
        test_file = CONFIG_DIR / "poset_b2.json"

        result = cli_runner.invoke(
            cli_app,
            [
                "--config",
                str(CONFIG_DIR),
                "validate",
                "--input",
                str(test_file),
                "--cap",
                "8",
                "--format",
                "table",
            ],
        )

        assert result.exit_code == 0
        assert result.stdout.startswith("command")

    @staticmethod
    def test_command_settings_beat_global_ones(
        cli_app: typer.Typer, cli_runner: typer.testing.CliRunner, caplog: pytest.LogCaptureFixture
    ) -> None:
        """Test the option after the command wins over the one before it."""
        result = cli_runner.invoke(
            cli_app, ["--cap", "8", "classify", "--fixture", "C(4)", "--cap", "3"]
        )

        assert result.exit_code == 2
        assert "CarrierTooLarge" in caplog.text

    @staticmethod
    def test_invalid_command_setting(
        cli_app: typer.Typer, cli_runner: typer.testing.CliRunner, caplog: pytest.LogCaptureFixture
    ) -> None:
        """Test a cap of zero after the command is rejected."""
        result = cli_runner.invoke(cli_app, ["classify", "--fixture", "B(1)", "--cap", "0"])

        assert result.exit_code == 2
        assert "Invalid configuration" in caplog.text

    @staticmethod
    def test_seed_after_the_command(
        cli_app: typer.Typer, cli_runner: typer.testing.CliRunner
    ) -> None:
        """Test ``search --seed`` matches the global ``--seed``."""
        args = ["search", "--holds", "boolean", "--fails", "basic_poset", "--size", "2"]
        args += ["--budget", "5"]

        before = cli_runner.invoke(cli_app, ["--seed", "5", *args])
        after = cli_runner.invoke(cli_app, [*args, "--seed", "5"])

        assert before.exit_code == after.exit_code == 0
        assert _report(before) == _report(after)

    @staticmethod
    def test_cap_from_environment(
        cli_app: typer.Typer, cli_runner: typer.testing.CliRunner, monkeypatch: pytest.MonkeyPatch
    ) -> None:
        """Test ``STONEWORK_CAP``."""
        monkeypatch.setenv("STONEWORK_CAP", "3")

        result = cli_runner.invoke(cli_app, ["validate", "--fixture", "C(4)"])

        assert result.exit_code == 2

    @staticmethod
    def test_invalid_config_value(
        cli_app: typer.Typer, cli_runner: typer.testing.CliRunner, caplog: pytest.LogCaptureFixture
    ) -> None:
        """Test a cap of zero is rejected."""
        config_file = CONFIG_DIR / "bad_cap.cfg"

        result = cli_runner.invoke(cli_app, ["--config", str(config_file), "fixtures"])

        assert result.exit_code == 2
        assert "Invalid configuration" in caplog.text

    @staticmethod
    def test_unknown_setting_warning(
        cli_app: typer.Typer, cli_runner: typer.testing.CliRunner, caplog: pytest.LogCaptureFixture
    ) -> None:
        """Test unknown settings are reported on request."""
        config_file = CONFIG_DIR / "unknown_setting.cfg"

        result = cli_runner.invoke(
            cli_app, ["--config", str(config_file), "--warn-unknown-settings", "fixtures"]
        )

        assert result.exit_code == 0
        assert "Unknown setting found in config file: 'colour'" in caplog.text

    @staticmethod
    def test_unknown_setting_silent(
        cli_app: typer.Typer, cli_runner: typer.testing.CliRunner, caplog: pytest.LogCaptureFixture
    ) -> None:
        """Test unknown settings are ignored by default."""
        config_file = CONFIG_DIR / "unknown_setting.cfg"

        result = cli_runner.invoke(cli_app, ["--config", str(config_file), "fixtures"])

        assert result.exit_code == 0
        assert "Unknown setting" not in caplog.text

    @staticmethod
    @pytest.mark.skipif(not _extras.TOMLI_INSTALLED, reason="Depends on toml extra.")
    def test_toml_config_file(cli_app: typer.Typer, cli_runner: typer.testing.CliRunner) -> None:
        """Test ``[tool.stonework]`` sets the report format."""
        config_file = CONFIG_DIR / "pyproject.toml"

        result = cli_runner.invoke(cli_app, ["--config", str(config_file), "fixtures"])

        assert result.exit_code == 0
        assert result.stdout.startswith("command")
