"""Command dispatch and report rendering."""
import json
import logging
import pathlib
import typing as t

from . import (
    axioms,
    config,
    errors,
    filters,
    fixtures,
    groupoid,
    ingest,
    isg,
    morphisms,
    relations,
    search,
    topology,
)
from .config import OutputFormat, RunConfig
from .groupoid import FiniteGroupoid
from .ingest import Kind, Structure
from .isg import FiniteInverseSemigroup
from .morphisms import BasicMorphismRel, PartialMap
from .order import FinitePoset
from .topology import FiniteSpace


logger = logging.getLogger(__name__)

Report = t.Dict[str, t.Any]
Result = t.Tuple[t.Any, bool]

DUAL_TARGETS = ("poset", "space", "semigroup", "groupoid")
MORPHISM_ACTIONS = ("validate", "close", "compose", "to-map", "from-map")
SEMIGROUP_RELATIONS = {
    "compatible": isg.compatibility,
    "bi_below": isg.bi_below,
    "simeq": isg.simeq,
}


def load(run_config: RunConfig, position: int = 0) -> Structure:
    """Build the fixture or read the ``position``-th input file.

    :raises stonework.errors.InputError: If neither is given.
    """
    if run_config.fixture is not None and position == 0:
        kind = run_config.arguments.get("kind")
        chosen = Kind(kind) if kind else None
        return fixtures.build(run_config.fixture, kind=chosen, cap=run_config.settings.cap)
    offset = position - 1 if run_config.fixture is not None else position
    if offset >= len(run_config.inputs):
        raise errors.InputError(f"command {run_config.command!r} needs --input or --fixture")
    return ingest.ingest(run_config.inputs[offset], cap=run_config.settings.cap)


def _expect(structure: Structure, wanted: t.Type[t.Any], command: str) -> t.Any:
    if not isinstance(structure, wanted):
        kind = ingest.kind_of(structure).value
        raise errors.PreconditionError(f"{command} does not apply to a {kind}")
    return structure


def _poset_of(structure: Structure, command: str) -> FinitePoset:
    if isinstance(structure, FiniteInverseSemigroup):
        return isg.natural_poset(structure)
    return t.cast(FinitePoset, _expect(structure, FinitePoset, command))


def _validate(structure: Structure, _run: RunConfig) -> Result:
    return {"kind": ingest.kind_of(structure).value, "structure": structure.as_dict()}, True


def _classify(structure: Structure, run: RunConfig) -> Result:
    if isinstance(structure, FiniteInverseSemigroup) and run.arguments.get("semigroup"):
        result = isg.classify_semigroup(structure).as_dict()
        result["distributivity"] = isg.distributivity_suite(structure)
        result["invariants"] = isg.semigroup_invariants(structure)
        return result, True
    if isinstance(structure, FiniteSpace):
        return {
            "t0": topology.is_t0(structure),
            "t1": topology.is_t1(structure),
            "discrete": topology.is_discrete(structure),
            "union_basis": topology.is_union_basis(structure)[0],
            "lclh": topology.lclh_characterizations(structure),
            "hausdorff": topology.hausdorff_characterizations(structure),
        }, True
    if isinstance(structure, FiniteGroupoid):
        report = groupoid.etale_basis_report(structure, ingest.declared_basis(structure))
        return {k: v.as_dict() for k, v in report.items()}, True
    return axioms.classify(_poset_of(structure, "classify")).as_dict(), True


def _auxiliary(P: FinitePoset, run: RunConfig) -> t.Optional[relations.Relations]:
    """The relations to check axioms against: ``leq``, explicit pairs or the derived ones."""
    chosen = run.arguments.get("auxiliary")
    if not chosen:
        return None
    if chosen == "leq":
        prec = relations.leq_relation(P)
    else:
        prec = relations.custom_auxiliary(P, [(a, b) for a, b in chosen])
    return relations.with_auxiliary(P, prec)


def _axioms(structure: Structure, run: RunConfig) -> Result:
    P = _poset_of(structure, "axioms")
    rels = _auxiliary(P, run)
    wanted = list(run.arguments.get("axioms") or [])
    if run.arguments.get("all") or not wanted:
        reports = axioms.check_all(P, rels)
        result: t.Dict[str, t.Any] = {k: v.as_dict() for k, v in reports.items()}
        result["ladder_violations"] = axioms.implication_ladder(P, rels, reports=reports)
        return result, True
    result = {}
    for axiom_id in wanted:
        if axiom_id == "prec_minimal":
            report = axioms.prec_is_minimal_auxiliary(P, cap=run.settings.minimality_cap)
        else:
            report = axioms.check_axiom(P, axiom_id, rels)
        result[axiom_id] = report.as_dict()
    return result, True


def _relation(structure: Structure, run: RunConfig) -> Result:
    kind = run.arguments.get("kind", "prec")
    if isinstance(structure, FiniteInverseSemigroup) and kind in SEMIGROUP_RELATIONS:
        rel = SEMIGROUP_RELATIONS[kind](structure)
    else:
        rel = relations.relation_by_kind(_poset_of(structure, "relation"), kind)
    return {"kind": kind, "pairs": [list(pair) for pair in rel.pairs()]}, True


def _ultrafilters(structure: Structure, run: RunConfig) -> Result:
    P = _poset_of(structure, "ultrafilters")
    oracle_cap = run.settings.oracle_cap if run.settings.oracle else 0
    found = filters.enumerate_prec_ultrafilters(P, oracle_cap=oracle_cap)
    result = {
        "count": len(found),
        "ultrafilters": {
            U.label: {
                "members": list(U.ids()),
                "characterizations": filters.ultrafilter_characterizations(P, U),
            }
            for U in found
        },
        "oracle_checked": P.size <= oracle_cap,
    }
    return result, True


def _dualize(structure: Structure, run: RunConfig) -> Result:
    target = run.arguments.get("target")
    if target == "poset":
        X, witness = topology.ultrafilter_space(_poset_of(structure, "dualize poset"))
        return {"space": X.as_dict(), "duality": witness.as_dict()}, True
    if target == "space":
        X = _expect(structure, FiniteSpace, "dualize space")
        return {"poset": topology.basis_to_poset(X).as_dict()}, True
    if target == "semigroup":
        S = _expect(structure, FiniteInverseSemigroup, "dualize semigroup")
        G, set_map = groupoid.ultrafilter_groupoid(S)
        sets = {a: list(arrows) for a, arrows in set_map.items()}
        return {"groupoid": G.as_dict(), "set_map": sets}, True
    if target == "groupoid":
        G = _expect(structure, FiniteGroupoid, "dualize groupoid")
        S, report = groupoid.groupoid_to_semigroup(G, ingest.declared_basis(G))
        return {"semigroup": S.as_dict(), "report": report}, True
    raise errors.InputError(f"dualize target must be one of {DUAL_TARGETS}, got {target!r}")


def _roundtrip(structure: Structure, _run: RunConfig) -> Result:
    if isinstance(structure, FiniteInverseSemigroup):
        ok = groupoid.semigroup_round_trip(structure)
    elif isinstance(structure, FinitePoset):
        ok = topology.round_trip_poset(structure)
    elif isinstance(structure, FiniteSpace):
        ok = topology.round_trip_space(structure)
    elif isinstance(structure, FiniteGroupoid):
        ok = groupoid.groupoid_round_trip(structure, ingest.declared_basis(structure))
    elif isinstance(structure, PartialMap):
        ok = morphisms.map_round_trip(structure)
    else:
        raise errors.PreconditionError("roundtrip does not apply to a morphism")
    return {"kind": ingest.kind_of(structure).value, "isomorphic": ok}, ok


def _principal(S: FiniteInverseSemigroup, element: t.Optional[str]) -> filters.FilterSet:
    if element is None:
        raise errors.InputError("lenz-product needs --left and --right")
    return filters.principal_filter(isg.natural_poset(S), element, "leq")


def _lenz_product(structure: Structure, run: RunConfig) -> Result:
    S = _expect(structure, FiniteInverseSemigroup, "lenz-product")
    T = _principal(S, run.arguments.get("left"))
    U = _principal(S, run.arguments.get("right"))
    return groupoid.lenz_product(S, T, U).as_dict(), True


def _sg_action(structure: Structure, run: RunConfig) -> Result:
    S = _expect(structure, FiniteInverseSemigroup, "sg-action")
    element = run.arguments.get("element")
    if element is None:
        raise errors.InputError("sg-action needs --element")
    wanted = run.arguments.get("ultrafilter")
    ultrafilters = filters.enumerate_prec_ultrafilters(isg.natural_poset(S))
    chosen = [U for U in ultrafilters if wanted is None or U.label == wanted]
    if not chosen:
        raise errors.NotAProperFilter(f"{wanted!r} names no ≺-ultrafilter of {S!r}")
    return [groupoid.sg_action(S, element, U) for U in chosen], True


def _morphism(structure: Structure, run: RunConfig) -> Result:
    action = run.arguments.get("action", "validate")
    close = bool(run.arguments.get("close"))
    if action == "from-map":
        phi = _expect(structure, PartialMap, "morphism from-map")
        union_basis = bool(run.arguments.get("union_basis", True))
        return morphisms.from_partial_map(phi, require_union_basis=union_basis).as_dict(), True
    m = _expect(structure, BasicMorphismRel, f"morphism {action}")
    if action == "validate":
        return m.as_dict(), True
    if action == "close":
        return morphisms.closure(m).as_dict(), True
    if action == "compose":
        second = _expect(load(run, 1), BasicMorphismRel, "morphism compose")
        return morphisms.compose(m, second, close=close).as_dict(), True
    if action == "to-map":
        return morphisms.to_partial_map(m).as_dict(), True
    raise errors.InputError(f"morphism action must be one of {MORPHISM_ACTIONS}, got {action!r}")


_STRUCTURE_COMMANDS: t.Dict[str, t.Callable[[Structure, RunConfig], Result]] = {
    "validate": _validate,
    "classify": _classify,
    "axioms": _axioms,
    "relation": _relation,
    "ultrafilters": _ultrafilters,
    "dualize": _dualize,
    "roundtrip": _roundtrip,
    "lenz-product": _lenz_product,
    "sg-action": _sg_action,
    "morphism": _morphism,
}
COMMANDS = tuple(_STRUCTURE_COMMANDS) + ("search", "fixtures")


def _source(run_config: RunConfig) -> t.Optional[str]:
    if run_config.fixture is not None:
        return run_config.fixture
    return str(run_config.inputs[0]) if run_config.inputs else None


def run(run_config: RunConfig) -> Report:
    """Execute one command.

    :return: The report with ``command``, ``structure``, ``result`` and ``passed``.
    :raises stonework.errors.InputError: On unknown commands or bad input.
    :raises stonework.errors.ConsistencyError: If an asserted check fails.
    """
    command = run_config.command
    logger.info(f"Run command {command!r}.")
    if command == "fixtures":
        result: t.Any = fixtures.catalogue()
        passed = True
    elif command == "search":
        settings = run_config.settings
        overrides = {
            "search_size": run_config.arguments.get("size"),
            "search_budget": run_config.arguments.get("budget"),
        }
        given = {k: v for k, v in overrides.items() if v is not None}
        if given:
            settings = config.StoneworkConfig(**{**settings.dict(), **given})
        result = search.search_counterexamples(
            run_config.arguments["holds"], run_config.arguments["fails"], settings
        )
        passed = True
    elif command in _STRUCTURE_COMMANDS:
        structure = load(run_config)
        result, passed = _STRUCTURE_COMMANDS[command](structure, run_config)
    else:
        raise errors.InputError(f"unknown command {command!r}, expected one of {COMMANDS}")
    logger.debug(f"Command {command!r} passed: {passed}.")
    return {
        "command": command,
        "structure": _source(run_config),
        "result": result,
        "passed": passed,
    }


def _flatten(value: t.Any, prefix: str = "") -> t.Iterator[t.Tuple[str, str]]:
    if isinstance(value, dict) and value:
        for key in sorted(value):
            yield from _flatten(value[key], f"{prefix}.{key}" if prefix else str(key))
    elif isinstance(value, list) and value and all(isinstance(v, dict) for v in value):
        for i, item in enumerate(value):
            yield from _flatten(item, f"{prefix}[{i}]")
    else:
        yield prefix, json.dumps(value, sort_keys=True, ensure_ascii=False)


class ReportPrinter:  # pylint: disable=too-few-public-methods
    """Render reports as JSON or as a two-column table."""

    def __init__(self, output_format: OutputFormat = OutputFormat.JSON) -> None:
        self.output_format = output_format

    def render(self, report: Report) -> str:
        if self.output_format == OutputFormat.JSON:
            return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False)
        rows = list(_flatten(report))
        width = max(len(key) for key, _ in rows)
        return "\n".join(f"{key.ljust(width)}  {value}" for key, value in rows)


def run_config_from(
    command: str,
    *,
    inputs: t.Sequence[pathlib.Path] = (),
    fixture: t.Optional[str] = None,
    arguments: t.Optional[t.Mapping[str, t.Any]] = None,
    settings: t.Optional[config.StoneworkConfig] = None,
) -> RunConfig:
    """Assemble a :class:`RunConfig` with default settings where none are given."""
    return RunConfig(
        command=command,
        inputs=list(inputs),
        fixture=fixture,
        arguments=dict(arguments or {}),
        settings=settings or config.StoneworkConfig(),
    )
