"""Reading structure files.

Every file is a JSON object with a ``kind`` field naming one of the schemas below. Morphism and
partial map files name their source and target files relative to their own directory.
"""
import enum
import json
import logging
import pathlib
import typing as t
import weakref

import pydantic

from . import errors, groupoid, isg, morphisms, order, topology
from .groupoid import FiniteGroupoid
from .isg import FiniteInverseSemigroup
from .morphisms import BasicMorphismRel, PartialMap
from .order import FinitePoset
from .topology import FiniteSpace


logger = logging.getLogger(__name__)

Structure = t.Union[
    FinitePoset, FiniteSpace, FiniteInverseSemigroup, FiniteGroupoid, BasicMorphismRel, PartialMap
]


class Kind(str, enum.Enum):
    """Structure kinds, as written in the ``kind`` field."""

    POSET = "poset"
    SPACE = "space"
    ISG = "isg"
    GROUPOID = "groupoid"
    MORPHISM = "morphism"
    PARTIAL_MAP = "partial_map"


def kind_of(structure: Structure) -> Kind:
    for kind, cls in (
        (Kind.ISG, FiniteInverseSemigroup),
        (Kind.POSET, FinitePoset),
        (Kind.SPACE, FiniteSpace),
        (Kind.GROUPOID, FiniteGroupoid),
        (Kind.MORPHISM, BasicMorphismRel),
        (Kind.PARTIAL_MAP, PartialMap),
    ):
        if isinstance(structure, cls):
            return kind
    raise TypeError(f"not a structure: {structure!r}")


class PosetFile(pydantic.BaseModel):  # pylint: disable=too-few-public-methods
    kind: t.Literal["poset"]
    elements: t.List[str]
    leq: t.List[t.Tuple[str, str]]
    zero: str


class SpaceFile(pydantic.BaseModel):  # pylint: disable=too-few-public-methods
    kind: t.Literal["space"]
    points: t.List[str]
    basis: t.List[t.List[str]]


class IsgFile(pydantic.BaseModel):  # pylint: disable=too-few-public-methods
    """Cayley table ``mult[i][j]`` of ``elements[i]·elements[j]``."""

    kind: t.Literal["isg"]
    elements: t.List[str]
    mult: t.List[t.List[str]]
    inv: t.List[str]
    zero: str

    @pydantic.validator("mult")
    @classmethod
    def square(  # noqa: N805
        cls, value: t.List[t.List[str]], values: t.Dict[str, t.Any]
    ) -> t.List[t.List[str]]:
        """Reject tables that are not ``n`` by ``n``.

        :raises ValueError: On a row count or row length other than the element count.
        """
        n = len(values.get("elements", []))
        if len(value) != n or any(len(row) != n for row in value):
            raise ValueError(f"expected a {n} x {n} table")
        return value


class GroupoidFile(pydantic.BaseModel):  # pylint: disable=too-few-public-methods
    """Defined products ``[g, h, gh]`` and an optional étale basis, bisections by default."""

    kind: t.Literal["groupoid"]
    arrows: t.List[str]
    product: t.List[t.Tuple[str, str, str]]
    inv: t.List[str]
    units: t.List[str]
    basis: t.Optional[t.List[t.List[str]]] = None


class MorphismFile(pydantic.BaseModel):  # pylint: disable=too-few-public-methods
    kind: t.Literal["morphism"]
    source: str
    target: str
    pairs: t.List[t.Tuple[str, str]]


class PartialMapFile(pydantic.BaseModel):  # pylint: disable=too-few-public-methods
    kind: t.Literal["partial_map"]
    source: str
    target: str
    map: t.Dict[str, str]


_SCHEMAS: t.Dict[str, t.Type[pydantic.BaseModel]] = {
    Kind.POSET.value: PosetFile,
    Kind.SPACE.value: SpaceFile,
    Kind.ISG.value: IsgFile,
    Kind.GROUPOID.value: GroupoidFile,
    Kind.MORPHISM.value: MorphismFile,
    Kind.PARTIAL_MAP.value: PartialMapFile,
}

#: Étale bases given in groupoid files, by groupoid.
_declared_bases: "weakref.WeakKeyDictionary[FiniteGroupoid, t.Tuple[groupoid.ArrowSet, ...]]" = (
    weakref.WeakKeyDictionary()
)


def declared_basis(G: FiniteGroupoid) -> t.Tuple[groupoid.ArrowSet, ...]:
    """The basis given with ``G`` in its file, else every bisection.

    An empty declared basis is kept as given.
    """
    basis = _declared_bases.get(G)
    return groupoid.bisections(G) if basis is None else basis


def _read_json(path: pathlib.Path) -> t.Any:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise errors.InputError(f"cannot read structure file '{path}': {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise errors.ParseError(str(path), exc.lineno, exc.colno, exc.msg) from exc


def parse(path: pathlib.Path) -> pydantic.BaseModel:
    """Read and schema-check a structure file without validating the structure.

    :raises stonework.errors.ParseError: On invalid JSON, with line and column.
    :raises stonework.errors.SchemaError: If the document matches no schema.
    """
    raw = _read_json(path)
    if not isinstance(raw, dict):
        raise errors.SchemaError(str(path), "<root>", "expected a JSON object")
    schema = _SCHEMAS.get(raw.get("kind"))  # type: ignore[arg-type]
    if schema is None:
        raise errors.SchemaError(
            str(path), "kind", f"expected one of {sorted(_SCHEMAS)}, got {raw.get('kind')!r}"
        )
    try:
        return schema.parse_obj(raw)
    except pydantic.ValidationError as exc:
        first = exc.errors()[0]
        location = ".".join(str(part) for part in first["loc"])
        raise errors.SchemaError(str(path), location, first["msg"]) from exc


def _as_poset(structure: Structure, path: pathlib.Path) -> FinitePoset:
    if isinstance(structure, FiniteInverseSemigroup):
        return isg.natural_poset(structure)
    if isinstance(structure, FinitePoset):
        return structure
    raise errors.SchemaError(str(path), "source", "morphism ends must be posets or semigroups")


def _as_space(structure: Structure, path: pathlib.Path) -> FiniteSpace:
    if not isinstance(structure, FiniteSpace):
        raise errors.SchemaError(str(path), "source", "partial map ends must be spaces")
    return structure


def ingest(path: pathlib.Path, *, cap: t.Optional[int] = None) -> Structure:
    """Read a structure file and validate it with the validator of its kind.

    :raises stonework.errors.InputError: On unreadable, malformed or invalid files.
    """
    document = parse(path)
    logger.debug(f"Parsed '{path}' as {document.kind}.")  # type: ignore[attr-defined]
    if isinstance(document, PosetFile):
        return order.validate_poset(document.elements, document.leq, document.zero, cap=cap)
    if isinstance(document, SpaceFile):
        return topology.space(document.points, document.basis, cap=cap)
    if isinstance(document, IsgFile):
        return isg.validate_isg(
            document.elements, document.mult, document.inv, document.zero, cap=cap
        )
    if isinstance(document, GroupoidFile):
        G = groupoid.validate_groupoid(
            document.arrows, document.product, document.inv, document.units, cap=cap
        )
        if document.basis is not None:
            _declared_bases[G] = tuple(
                frozenset(G.index(g) for g in B) for B in document.basis
            )
        return G
    base = path.parent
    if isinstance(document, MorphismFile):
        S = _as_poset(ingest(base / document.source, cap=cap), path)
        T = _as_poset(ingest(base / document.target, cap=cap), path)
        return morphisms.validate_morphism(document.pairs, S, T)
    assert isinstance(document, PartialMapFile)
    X = _as_space(ingest(base / document.source, cap=cap), path)
    Y = _as_space(ingest(base / document.target, cap=cap), path)
    return morphisms.partial_map(X, Y, document.map)
