"""CLI for stonework."""
import dataclasses
import enum
import importlib.metadata
import logging
import pathlib
import typing as t

import pydantic
import typer

from stonework import _extras, config as config_mod, errors, runner


logger = logging.getLogger(__name__)

HELP_CONFIG = """Config file to load. Can be a INI file or directory.
If a directory is passed it will be searched for .stonework.cfg | setup.cfg.
If 'NONE' is passed no config file is loaded at all.
"""
if _extras.TOMLI_INSTALLED:  # pragma: no cover
    HELP_CONFIG = """Config file to load. Can be a INI or TOML file or directory.
If a directory is passed it will be searched for .stonework.cfg | pyproject.toml | setup.cfg.
If 'NONE' is passed no config file is loaded at all.
"""
HELP_WARN_UNKNOWN_SETTINGS = """Log a WARNING for unknown settings in config files.
Can be hidden via --log-level."""
HELP_LOG_LEVEL = """The log level of the application.
Valid levels are: DEBUG | INFO | WARNING | ERROR | CRITICAL.
Defaults to WARNING.
"""
HELP_FORMAT = f"""Report format: json | table.
Defaults to {config_mod.OutputFormat.JSON.value}.
Can be set in config file.
"""
HELP_CAP = f"""Largest admissible carrier.
Defaults to {config_mod.DEFAULT_CARRIER_CAP}. Can be set in config file or via STONEWORK_CAP.
"""
HELP_SEED = "Seed of every randomized procedure. Can be set in config file."
HELP_ORACLE = "Run the subset-enumeration oracles in addition to the fast paths."
HELP_INPUT = "Structure file (JSON). Repeat for commands taking two structures."
HELP_FIXTURE = "Built-in structure, e.g. 'B(2)', 'I2' or 'pair(2)'. See the fixtures command."
HELP_FORM = "Form to build a fixture in: poset | space | isg | groupoid."
HELP_SEMIGROUP = "Classify as an inverse semigroup instead of by its natural order."
HELP_ALL = "Check every registered axiom and the implication ladder."
HELP_AXIOM = "Axiom id to check. Can be repeated. 'prec_minimal' runs the minimality check."
HELP_AUXILIARY = """Pair 'A,B' of an auxiliary relation to check the axioms against
instead of the derived one. Can be repeated."""
HELP_AUXILIARY_LEQ = "Check the axioms against the order itself as auxiliary relation."
HELP_KIND = "Relation to print: prec | smile | perp | leq | compatible | bi_below | simeq."
HELP_LEFT = "Generator of the left principal filter."
HELP_RIGHT = "Generator of the right principal filter."
HELP_ELEMENT = "Element acting on the ultrafilters."
HELP_ULTRAFILTER = "Label of a single ultrafilter, e.g. 'U_11'. Defaults to all."
HELP_CLOSE = "Close the composite under the extension relation."
HELP_ANY_BASIS = "Accept bases that are not ∪-bases when translating a partial map."
HELP_HOLDS = "Property that must hold."
HELP_FAILS = "Property that must fail."
HELP_SIZE = "Largest carrier of the exhaustive phase."
HELP_BUDGET = "Number of random draws."


class DualTarget(str, enum.Enum):
    POSET = "poset"
    SPACE = "space"
    SEMIGROUP = "semigroup"
    GROUPOID = "groupoid"


class MorphismAction(str, enum.Enum):
    VALIDATE = "validate"
    CLOSE = "close"
    COMPOSE = "compose"
    TO_MAP = "to-map"
    FROM_MAP = "from-map"


class Form(str, enum.Enum):
    POSET = "poset"
    SPACE = "space"
    ISG = "isg"
    GROUPOID = "groupoid"


INPUT_OPTION: t.Any = typer.Option(None, "--input", "-i", help=HELP_INPUT)
FIXTURE_OPTION: t.Any = typer.Option(None, "--fixture", "-f", metavar="NAME", help=HELP_FIXTURE)
FORM_OPTION: t.Any = typer.Option(None, "--as", help=HELP_FORM)
FORMAT_OPTION: t.Any = typer.Option(None, "--format", help=HELP_FORMAT)
CAP_OPTION: t.Any = typer.Option(None, "--cap", metavar="N", help=HELP_CAP)
SEED_OPTION: t.Any = typer.Option(None, "--seed", metavar="N", help=HELP_SEED)
ORACLE_OPTION: t.Any = typer.Option(None, "--oracle", help=HELP_ORACLE)


@dataclasses.dataclass
class CliState:
    """Settings given before the subcommand.

    :param explicit: Values of the global options.
    :param file_values: Values read from the config file.
    """

    explicit: t.Dict[str, t.Any]
    file_values: t.Optional[t.Dict[str, t.Any]] = None

    def settings(
        self, overrides: t.Optional[t.Mapping[str, t.Any]] = None
    ) -> config_mod.StoneworkConfig:
        """Merge the subcommand's options over the global ones.

        :raises pydantic.ValidationError: On invalid values.
        """
        given = {k: v for k, v in (overrides or {}).items() if v is not None}
        return config_mod.merge_configs({**self.explicit, **given}, self.file_values)


def setup_logger(loglevel: str) -> None:
    """Set up logging.

    :param loglevel: Level to log at.
    :raises ValueError: On invalid logging levels.
    """
    numeric_level = getattr(logging, loglevel.upper(), None)
    if not isinstance(numeric_level, int):
        raise ValueError(f"Invalid log level: {loglevel}")

    logging.basicConfig(level=numeric_level)


def version_callback(value: bool) -> None:
    """Print the version and exit."""
    if value:
        typer.echo(f"stonework Version: {importlib.metadata.version('stonework')}")
        raise typer.Exit()


def parse_pairs(values: t.Optional[t.List[str]]) -> t.List[t.Tuple[str, str]]:
    """Split ``A,B`` option values into id pairs.

    :raises typer.BadParameter: If a value has no single comma.
    """
    pairs = []
    for value in values or []:
        parts = value.split(",")
        if len(parts) != 2:
            raise typer.BadParameter(f"expected 'A,B', got {value!r}", param_hint="--auxiliary")
        pairs.append((parts[0].strip(), parts[1].strip()))
    return pairs


app = typer.Typer(help="Finite-model lab for non-commutative Stone duality.")


@app.callback()
def cli(  # pylint: disable=too-many-arguments
    ctx: typer.Context,
    config: t.Optional[pathlib.Path] = typer.Option(  # noqa: M511,B008
        None, "--config", help=HELP_CONFIG
    ),
    warn_unknown_settings: t.Optional[bool] = typer.Option(  # noqa: M511,B008
        None, "--warn-unknown-settings", help=HELP_WARN_UNKNOWN_SETTINGS
    ),
    log_level: str = typer.Option(  # noqa: M511,B008
        "WARNING", metavar="LEVEL", help=HELP_LOG_LEVEL
    ),
    output_format: t.Optional[config_mod.OutputFormat] = FORMAT_OPTION,
    cap: t.Optional[int] = CAP_OPTION,
    seed: t.Optional[int] = SEED_OPTION,
    oracle: t.Optional[bool] = ORACLE_OPTION,
    version: t.Optional[bool] = typer.Option(  # pylint: disable=unused-argument # noqa: M511,B008
        None, "--version", callback=version_callback, is_eager=True
    ),
) -> None:
    """CLI of stonework.

    --format, --cap, --seed and --oracle can also follow the subcommand.
    """
    setup_logger(log_level)

    file_values = None
    if config is not None:
        try:
            file_values = config_mod.load_config_file_from_path(
                config, warn_unknown_settings=bool(warn_unknown_settings)
            )
        except FileNotFoundError as exc:
            if not exc.strerror.startswith("Passed config"):  # pragma: no cover
                raise
            logger.critical(f"### Passed config path was not found: '{exc.filename}'")
            raise typer.Exit(code=2) from None

    logger.info("Create main configuration from CLI options.")
    explicit = {"cap": cap, "seed": seed, "oracle": oracle, "output_format": output_format}
    state = CliState(
        explicit={k: v for k, v in explicit.items() if v is not None}, file_values=file_values
    )
    try:
        state.settings()
    except pydantic.ValidationError as exc:
        logger.critical(f"### Invalid configuration: {exc}")
        raise typer.Exit(code=2) from None
    ctx.obj = state


def _execute(  # pylint: disable=too-many-arguments
    ctx: typer.Context,
    command: str,
    overrides: t.Mapping[str, t.Any],
    *,
    inputs: t.Optional[t.List[pathlib.Path]] = None,
    fixture: t.Optional[str] = None,
    form: t.Optional[Form] = None,
    **arguments: t.Any,
) -> None:
    state: CliState = ctx.obj
    try:
        settings = state.settings(overrides)
    except pydantic.ValidationError as exc:
        logger.critical(f"### Invalid configuration: {exc}")
        raise typer.Exit(code=2) from None
    if form is not None:
        arguments["kind"] = form.value
    run_config = runner.run_config_from(
        command, inputs=inputs or (), fixture=fixture, arguments=arguments, settings=settings
    )
    try:
        logger.debug(f"Run {command!r} with {arguments}.")
        report = runner.run(run_config)
    except errors.ConsistencyError as exc:
        logger.critical(f"### Consistency check failed: {exc}")
        raise typer.Exit(code=1) from None
    except errors.InputError as exc:
        logger.critical(f"### {type(exc).__name__}: {exc}")
        raise typer.Exit(code=2) from None

    typer.echo(runner.ReportPrinter(settings.output_format).render(report))
    raise typer.Exit(code=0 if report["passed"] else 1)


def _settings(
    output_format: t.Optional[config_mod.OutputFormat],
    cap: t.Optional[int],
    seed: t.Optional[int],
    oracle: t.Optional[bool],
) -> t.Dict[str, t.Any]:
    return {"output_format": output_format, "cap": cap, "seed": seed, "oracle": oracle}


@app.command()
def validate(  # pylint: disable=too-many-arguments
    ctx: typer.Context,
    inputs: t.Optional[t.List[pathlib.Path]] = INPUT_OPTION,
    fixture: t.Optional[str] = FIXTURE_OPTION,
    form: t.Optional[Form] = FORM_OPTION,
    output_format: t.Optional[config_mod.OutputFormat] = FORMAT_OPTION,
    cap: t.Optional[int] = CAP_OPTION,
    seed: t.Optional[int] = SEED_OPTION,
    oracle: t.Optional[bool] = ORACLE_OPTION,
) -> None:
    """Validate a structure and print it back."""
    overrides = _settings(output_format, cap, seed, oracle)
    _execute(ctx, "validate", overrides, inputs=inputs, fixture=fixture, form=form)


@app.command()
def classify(  # pylint: disable=too-many-arguments
    ctx: typer.Context,
    inputs: t.Optional[t.List[pathlib.Path]] = INPUT_OPTION,
    fixture: t.Optional[str] = FIXTURE_OPTION,
    form: t.Optional[Form] = FORM_OPTION,
    semigroup: bool = typer.Option(False, "--semigroup", help=HELP_SEMIGROUP),  # noqa: M511,B008
    output_format: t.Optional[config_mod.OutputFormat] = FORMAT_OPTION,
    cap: t.Optional[int] = CAP_OPTION,
    seed: t.Optional[int] = SEED_OPTION,
    oracle: t.Optional[bool] = ORACLE_OPTION,
) -> None:
    """Classify a poset, semigroup, space or groupoid."""
    overrides = _settings(output_format, cap, seed, oracle)
    _execute(
        ctx, "classify", overrides, inputs=inputs, fixture=fixture, form=form, semigroup=semigroup
    )


@app.command()
def axioms(  # pylint: disable=too-many-arguments
    ctx: typer.Context,
    inputs: t.Optional[t.List[pathlib.Path]] = INPUT_OPTION,
    fixture: t.Optional[str] = FIXTURE_OPTION,
    form: t.Optional[Form] = FORM_OPTION,
    check_all: bool = typer.Option(False, "--all", help=HELP_ALL),  # noqa: M511,B008
    axiom: t.Optional[t.List[str]] = typer.Option(  # noqa: M511,B008
        None, "--axiom", metavar="ID", help=HELP_AXIOM
    ),
    auxiliary: t.Optional[t.List[str]] = typer.Option(  # noqa: M511,B008
        None, "--auxiliary", metavar="A,B", help=HELP_AUXILIARY
    ),
    auxiliary_leq: bool = typer.Option(  # noqa: M511,B008
        False, "--auxiliary-leq", help=HELP_AUXILIARY_LEQ
    ),
    output_format: t.Optional[config_mod.OutputFormat] = FORMAT_OPTION,
    cap: t.Optional[int] = CAP_OPTION,
    seed: t.Optional[int] = SEED_OPTION,
    oracle: t.Optional[bool] = ORACLE_OPTION,
) -> None:
    """Decide axioms exhaustively and report witnesses."""
    if auxiliary and auxiliary_leq:
        raise typer.BadParameter("use either --auxiliary or --auxiliary-leq")
    chosen: t.Any = "leq" if auxiliary_leq else parse_pairs(auxiliary) or None
    _execute(
        ctx,
        "axioms",
        _settings(output_format, cap, seed, oracle),
        inputs=inputs,
        fixture=fixture,
        form=form,
        all=check_all,
        axioms=axiom,
        auxiliary=chosen,
    )


@app.command()
def relation(  # pylint: disable=too-many-arguments
    ctx: typer.Context,
    inputs: t.Optional[t.List[pathlib.Path]] = INPUT_OPTION,
    fixture: t.Optional[str] = FIXTURE_OPTION,
    form: t.Optional[Form] = FORM_OPTION,
    kind: str = typer.Option("prec", help=HELP_KIND),  # noqa: M511,B008
    output_format: t.Optional[config_mod.OutputFormat] = FORMAT_OPTION,
    cap: t.Optional[int] = CAP_OPTION,
    seed: t.Optional[int] = SEED_OPTION,
    oracle: t.Optional[bool] = ORACLE_OPTION,
) -> None:
    """Print the pairs of a derived relation."""
    overrides = _settings(output_format, cap, seed, oracle)
    _execute(ctx, "relation", overrides, inputs=inputs, fixture=fixture, form=form, kind=kind)


@app.command()
def ultrafilters(  # pylint: disable=too-many-arguments
    ctx: typer.Context,
    inputs: t.Optional[t.List[pathlib.Path]] = INPUT_OPTION,
    fixture: t.Optional[str] = FIXTURE_OPTION,
    form: t.Optional[Form] = FORM_OPTION,
    output_format: t.Optional[config_mod.OutputFormat] = FORMAT_OPTION,
    cap: t.Optional[int] = CAP_OPTION,
    seed: t.Optional[int] = SEED_OPTION,
    oracle: t.Optional[bool] = ORACLE_OPTION,
) -> None:
    """Enumerate the ≺-ultrafilters with their characterizations."""
    overrides = _settings(output_format, cap, seed, oracle)
    _execute(ctx, "ultrafilters", overrides, inputs=inputs, fixture=fixture, form=form)


@app.command()
def dualize(  # pylint: disable=too-many-arguments
    ctx: typer.Context,
    target: DualTarget = typer.Argument(  # noqa: M511,B008
        ..., help="Kind of the structure to dualize."
    ),
    inputs: t.Optional[t.List[pathlib.Path]] = INPUT_OPTION,
    fixture: t.Optional[str] = FIXTURE_OPTION,
    form: t.Optional[Form] = FORM_OPTION,
    output_format: t.Optional[config_mod.OutputFormat] = FORMAT_OPTION,
    cap: t.Optional[int] = CAP_OPTION,
    seed: t.Optional[int] = SEED_OPTION,
    oracle: t.Optional[bool] = ORACLE_OPTION,
) -> None:
    """Build the dual space, poset, groupoid or semigroup."""
    _execute(
        ctx,
        "dualize",
        _settings(output_format, cap, seed, oracle),
        inputs=inputs,
        fixture=fixture,
        form=form,
        target=target.value,
    )


@app.command()
def roundtrip(  # pylint: disable=too-many-arguments
    ctx: typer.Context,
    inputs: t.Optional[t.List[pathlib.Path]] = INPUT_OPTION,
    fixture: t.Optional[str] = FIXTURE_OPTION,
    form: t.Optional[Form] = FORM_OPTION,
    output_format: t.Optional[config_mod.OutputFormat] = FORMAT_OPTION,
    cap: t.Optional[int] = CAP_OPTION,
    seed: t.Optional[int] = SEED_OPTION,
    oracle: t.Optional[bool] = ORACLE_OPTION,
) -> None:
    """Dualize twice and check the result is isomorphic to the input. Exits 1 if not."""
    overrides = _settings(output_format, cap, seed, oracle)
    _execute(ctx, "roundtrip", overrides, inputs=inputs, fixture=fixture, form=form)


@app.command("lenz-product")
def lenz_product(  # pylint: disable=too-many-arguments
    ctx: typer.Context,
    left: str = typer.Option(..., help=HELP_LEFT),  # noqa: M511,B008
    right: str = typer.Option(..., help=HELP_RIGHT),  # noqa: M511,B008
    inputs: t.Optional[t.List[pathlib.Path]] = INPUT_OPTION,
    fixture: t.Optional[str] = FIXTURE_OPTION,
    output_format: t.Optional[config_mod.OutputFormat] = FORMAT_OPTION,
    cap: t.Optional[int] = CAP_OPTION,
    seed: t.Optional[int] = SEED_OPTION,
    oracle: t.Optional[bool] = ORACLE_OPTION,
) -> None:
    """Multiply two principal ≤-filters of a semigroup."""
    _execute(
        ctx,
        "lenz-product",
        _settings(output_format, cap, seed, oracle),
        inputs=inputs,
        fixture=fixture,
        left=left,
        right=right,
    )


@app.command("sg-action")
def sg_action(  # pylint: disable=too-many-arguments
    ctx: typer.Context,
    element: str = typer.Option(..., help=HELP_ELEMENT),  # noqa: M511,B008
    ultrafilter: t.Optional[str] = typer.Option(  # noqa: M511,B008
        None, metavar="LABEL", help=HELP_ULTRAFILTER
    ),
    inputs: t.Optional[t.List[pathlib.Path]] = INPUT_OPTION,
    fixture: t.Optional[str] = FIXTURE_OPTION,
    output_format: t.Optional[config_mod.OutputFormat] = FORMAT_OPTION,
    cap: t.Optional[int] = CAP_OPTION,
    seed: t.Optional[int] = SEED_OPTION,
    oracle: t.Optional[bool] = ORACLE_OPTION,
) -> None:
    """Evaluate the action of an element on ultrafilters."""
    _execute(
        ctx,
        "sg-action",
        _settings(output_format, cap, seed, oracle),
        inputs=inputs,
        fixture=fixture,
        element=element,
        ultrafilter=ultrafilter,
    )


@app.command()
def morphism(  # pylint: disable=too-many-arguments
    ctx: typer.Context,
    action: MorphismAction = typer.Argument(  # noqa: M511,B008
        ..., help="What to do with the morphism."
    ),
    inputs: t.Optional[t.List[pathlib.Path]] = INPUT_OPTION,
    close: bool = typer.Option(False, "--close", help=HELP_CLOSE),  # noqa: M511,B008
    any_basis: bool = typer.Option(False, "--any-basis", help=HELP_ANY_BASIS),  # noqa: M511,B008
    output_format: t.Optional[config_mod.OutputFormat] = FORMAT_OPTION,
    cap: t.Optional[int] = CAP_OPTION,
    seed: t.Optional[int] = SEED_OPTION,
    oracle: t.Optional[bool] = ORACLE_OPTION,
) -> None:
    """Validate, close, compose or translate basic morphisms and partial maps."""
    _execute(
        ctx,
        "morphism",
        _settings(output_format, cap, seed, oracle),
        inputs=inputs,
        action=action.value,
        close=close,
        union_basis=not any_basis,
    )


@app.command()
def search(  # pylint: disable=too-many-arguments
    ctx: typer.Context,
    holds: str = typer.Option(..., metavar="PROPERTY", help=HELP_HOLDS),  # noqa: M511,B008
    fails: str = typer.Option(..., metavar="PROPERTY", help=HELP_FAILS),  # noqa: M511,B008
    size: t.Optional[int] = typer.Option(None, metavar="N", help=HELP_SIZE),  # noqa: M511,B008
    budget: t.Optional[int] = typer.Option(  # noqa: M511,B008
        None, metavar="N", help=HELP_BUDGET
    ),
    output_format: t.Optional[config_mod.OutputFormat] = FORMAT_OPTION,
    cap: t.Optional[int] = CAP_OPTION,
    seed: t.Optional[int] = SEED_OPTION,
    oracle: t.Optional[bool] = ORACLE_OPTION,
) -> None:
    """Search for a structure where one property holds and another fails."""
    overrides = _settings(output_format, cap, seed, oracle)
    _execute(ctx, "search", overrides, holds=holds, fails=fails, size=size, budget=budget)


@app.command()
def fixtures(
    ctx: typer.Context,
    output_format: t.Optional[config_mod.OutputFormat] = FORMAT_OPTION,
) -> None:
    """List the built-in fixtures."""
    _execute(ctx, "fixtures", _settings(output_format, None, None, None))


typer_click_object = typer.main.get_command(app)


def main() -> None:
    """Run the CLI."""
    app()


if __name__ == "__main__":
    main()
