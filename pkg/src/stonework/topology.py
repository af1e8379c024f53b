"""Finite topological spaces with a distinguished basis and the ultrafilter space of a poset.

A finite topology is determined by the minimal neighbourhood ``N(g)`` of each point, the
intersection of the basis sets containing ``g``. A set is open iff it contains ``N(g)`` for each
of its points. Every subset of a finite space is compact, so compact containment is inclusion.
"""
import dataclasses
import enum
import functools
import itertools
import logging
import typing as t

import numpy as np

from . import axioms, config, errors, filters, order, relations
from .filters import FilterSet
from .order import BoolMatrix, FinitePoset


logger = logging.getLogger(__name__)

PointSet = t.FrozenSet[int]


@dataclasses.dataclass(frozen=True, eq=False)
class FiniteSpace:
    """A finite space given by points and a basis of point index sets.

    The basis always contains the empty set.
    """

    points: t.Tuple[str, ...]
    basis: t.Tuple[PointSet, ...]

    @property
    def size(self) -> int:
        return len(self.points)

    @functools.cached_property
    def _positions(self) -> t.Dict[str, int]:
        return {p: i for i, p in enumerate(self.points)}

    def index(self, point: str) -> int:
        """Return the index of ``point``.

        :raises stonework.errors.UnknownElement: If the id is not a point.
        """
        try:
            return self._positions[point]
        except KeyError:
            raise errors.UnknownElement(f"unknown point id: {point!r}") from None

    def ids(self, indices: t.Iterable[int]) -> t.Tuple[str, ...]:
        return tuple(self.points[i] for i in sorted(indices))

    def subset(self, points: t.Iterable[str]) -> PointSet:
        return frozenset(self.index(p) for p in points)

    @functools.cached_property
    def neighbourhoods(self) -> BoolMatrix:
        """``neighbourhoods[g, h]`` iff ``h`` lies in the minimal neighbourhood of ``g``."""
        return order.frozen(_minimal_neighbourhoods(self.size, self.basis))

    @functools.cached_property
    def opens(self) -> t.Tuple[PointSet, ...]:
        """Every open set, in order of size then members.

        :raises stonework.errors.CarrierTooLarge: Above the configured oracle cap.
        """
        cap = config.StoneworkConfig().oracle_cap
        if self.size > cap:
            raise errors.CarrierTooLarge(self.size, cap, "open set enumeration")
        found: t.Set[PointSet] = {frozenset()}
        for g in range(self.size):
            block = frozenset(np.flatnonzero(self.neighbourhoods[g]).tolist())
            found |= {U | block for U in found}
        return tuple(sorted(found, key=lambda U: (len(U), sorted(U))))

    def label(self, members: t.Iterable[int]) -> str:
        return "{" + ",".join(self.ids(members)) + "}"

    def as_dict(self) -> t.Dict[str, t.Any]:
        return {
            "kind": "space",
            "points": list(self.points),
            "basis": [list(self.ids(B)) for B in self.basis],
        }

    def __repr__(self) -> str:
        return f"FiniteSpace(points={self.size}, basis={len(self.basis)})"


def _minimal_neighbourhoods(size: int, basis: t.Sequence[PointSet]) -> BoolMatrix:
    result = np.ones((size, size), dtype=bool)
    for B in basis:
        mask = np.zeros(size, dtype=bool)
        mask[list(B)] = True
        result[mask] &= mask
    return result


def _basis_failure(size: int, basis: t.Sequence[PointSet]) -> t.Optional[t.Tuple[str, int]]:
    """``("cover", g)`` or ``("intersection", g)`` for the first failing point, else ``None``."""
    covered = set().union(*basis) if basis else set()
    neighbourhoods = _minimal_neighbourhoods(size, basis)
    family = set(basis)
    for g in range(size):
        if g not in covered:
            return "cover", g
        if frozenset(np.flatnonzero(neighbourhoods[g]).tolist()) not in family:
            return "intersection", g
    return None


def space(
    points: t.Sequence[str], basis: t.Iterable[t.Iterable[str]], *, cap: t.Optional[int] = None
) -> FiniteSpace:
    """Validate a finite space given by a basis of point id lists.

    Duplicate basis sets are merged and the empty set is added.

    :raises stonework.errors.NotABasis: If a point is uncovered or the family is not closed
        enough under intersections to be a basis.
    """
    limit = config.StoneworkConfig().cap if cap is None else cap
    if len(points) > limit:
        raise errors.CarrierTooLarge(len(points), limit, "space")
    if len(set(points)) != len(points):
        raise errors.SchemaError("<space>", "points", "point ids must be unique")
    positions = {p: i for i, p in enumerate(points)}
    family: t.Set[PointSet] = {frozenset()}
    for members in basis:
        try:
            family.add(frozenset(positions[p] for p in members))
        except KeyError as exc:
            raise errors.UnknownElement(f"basis set uses unknown point {exc.args[0]!r}") from None
    ordered = tuple(sorted(family, key=lambda B: (len(B), sorted(B))))
    failure = _basis_failure(len(points), ordered)
    if failure is not None:
        clause, g = failure
        if clause == "cover":
            raise errors.NotABasis((points[g],), f"point {points[g]!r} is in no basis set")
        raise errors.NotABasis(
            (points[g],), f"no basis set around {points[g]!r} fits inside the others"
        )
    X = FiniteSpace(points=tuple(points), basis=ordered)
    logger.debug(f"Validated {X!r}.")
    return X


def discrete_space(points: t.Sequence[str], *, powerset: bool = True) -> FiniteSpace:
    """The discrete space on ``points``.

    :param powerset: Use every subset as the basis, otherwise only the singletons.
    """
    if powerset:
        basis = [c for k in range(len(points) + 1) for c in itertools.combinations(points, k)]
    else:
        basis = [(p,) for p in points]
    return space(points, basis)


def sierpinski_space() -> FiniteSpace:
    """Points ``x`` and ``y`` with opens ``{}``, ``{x}`` and ``{x,y}``."""
    return space(["x", "y"], [["x"], ["x", "y"]])


def _mask(X: FiniteSpace, A: t.Iterable[int]) -> np.ndarray:
    mask = np.zeros(X.size, dtype=bool)
    mask[list(A)] = True
    return mask


def minimal_neighbourhood(X: FiniteSpace, g: str) -> t.Tuple[str, ...]:
    return X.ids(np.flatnonzero(X.neighbourhoods[X.index(g)]).tolist())


def is_open(X: FiniteSpace, A: PointSet) -> bool:
    mask = _mask(X, A)
    return bool((~mask[:, None] | ~X.neighbourhoods | mask[None, :]).all())


def closure(X: FiniteSpace, A: PointSet) -> PointSet:
    """Points whose every neighbourhood meets ``A``."""
    hits = (X.neighbourhoods & _mask(X, A)[None, :]).any(axis=1)
    return frozenset(np.flatnonzero(hits).tolist())


def interior(X: FiniteSpace, A: PointSet) -> PointSet:
    inside = (~X.neighbourhoods | _mask(X, A)[None, :]).all(axis=1)
    return frozenset(np.flatnonzero(inside).tolist())


def is_t0(X: FiniteSpace) -> bool:
    N = X.neighbourhoods
    return bool(((N & N.T) == np.eye(X.size, dtype=bool)).all())


def is_t1(X: FiniteSpace) -> bool:
    return all(closure(X, frozenset({g})) == {g} for g in range(X.size))


def is_discrete(X: FiniteSpace) -> bool:
    return all(is_open(X, frozenset({g})) for g in range(X.size))


def is_compact(X: FiniteSpace, A: PointSet) -> bool:
    """Every open cover of a finite set has a finite subcover, namely itself."""
    if not A <= frozenset(range(X.size)):
        raise errors.UnknownElement(f"subset {sorted(A)} is not inside {X!r}")
    return True


def compact_containment(X: FiniteSpace, O: PointSet, N: PointSet) -> bool:
    """``O ⋐ N`` iff some compact ``C`` has ``O ⊆ C ⊆ N``.

    ``C = O`` is the smallest candidate and it is always compact here, so this is ``O ⊆ N``.
    """
    return is_compact(X, O) and O <= N


def is_hausdorff_subset(X: FiniteSpace, A: PointSet) -> bool:
    """Distinct points of ``A`` have disjoint neighbourhoods in the subspace topology."""
    mask = _mask(X, A)
    N = X.neighbourhoods & mask[None, :]
    overlap = (N.astype(np.int64) @ N.T.astype(np.int64)) > 0
    distinct = mask[:, None] & mask[None, :] & ~np.eye(X.size, dtype=bool)
    return not (overlap & distinct).any()


def _neighbourhood(X: FiniteSpace, g: int) -> PointSet:
    return frozenset(np.flatnonzero(X.neighbourhoods[g]).tolist())


def is_locally_hausdorff(X: FiniteSpace) -> bool:
    return all(is_hausdorff_subset(X, _neighbourhood(X, g)) for g in range(X.size))


def is_locally_compact(X: FiniteSpace) -> bool:
    """Every basic neighbourhood of a point compactly contains a smaller neighbourhood."""
    holds = all(compact_containment(X, _neighbourhood(X, g), B) for B in X.basis for g in B)
    errors.ensure(holds, "finite spaces are locally compact")
    return holds


def union_basis_failure(
    X: FiniteSpace, basis: t.Optional[t.Sequence[PointSet]] = None
) -> t.Optional[t.Tuple[str, str, str]]:
    """First pair breaking ``O∪N ∈ S ⇔ O∪N ⊆ C`` for some compact Hausdorff ``C``.

    The smallest candidate is ``C = O∪N``, and Hausdorff subsets are hereditary.

    :return: ``(O, N, direction)`` with ``direction`` naming the failing implication.
    """
    family = X.basis if basis is None else tuple(basis)
    members = set(family)
    for O, N in itertools.combinations_with_replacement(family, 2):
        union = O | N
        separated = is_compact(X, union) and is_hausdorff_subset(X, union)
        if (union in members) != separated:
            if separated:
                direction = "Hausdorff union missing from basis"
            else:
                direction = "union in basis is not Hausdorff"
            return X.label(O), X.label(N), direction
    return None


def is_union_basis(X: FiniteSpace) -> t.Tuple[bool, t.Optional[t.Tuple[str, str, str]]]:
    failure = union_basis_failure(X)
    if failure is not None:
        logger.debug(f"{X!r} basis is not a ∪-basis at {failure}.")
    return failure is None, failure


def lclh_characterizations(X: FiniteSpace) -> t.Dict[str, bool]:
    """Evaluate the three equivalent local compactness and local Hausdorff clauses.

    The first clause tests the open sets lying inside a compact Hausdorff set, the largest
    candidate for a ∪-basis.

    :raises stonework.errors.ConsistencyError: If the clauses disagree or if the verdict
        differs from discreteness.
    """
    candidate = [U for U in X.opens if is_hausdorff_subset(X, U)]
    has_union_basis = (
        _basis_failure(X.size, candidate) is None and union_basis_failure(X, candidate) is None
    )
    lclh = is_locally_compact(X) and is_locally_hausdorff(X)
    compact_hausdorff_neighbourhoods = all(
        any(g in interior(X, C) and is_hausdorff_subset(X, C) for C in X.opens)
        for g in range(X.size)
    )
    clauses = {
        "union_basis": has_union_basis,
        "locally_compact_locally_hausdorff": lclh,
        "compact_hausdorff_neighbourhoods": compact_hausdorff_neighbourhoods,
    }
    errors.ensure(len(set(clauses.values())) == 1, "∪-basis iff LCLH iff local compact Hausdorff")
    errors.ensure(has_union_basis == is_discrete(X), "finite spaces with a ∪-basis are discrete")
    return clauses


def hausdorff_characterizations(X: FiniteSpace) -> t.Dict[str, bool]:
    """Evaluate Hausdorffness, closedness of compact sets and the basis closure clause.

    Agreement is asserted on locally compact T0 spaces only.
    """
    everything = frozenset(range(X.size))
    hausdorff = is_hausdorff_subset(X, everything)
    # each subset is a finite union of singletons, all of them compact
    compact_closed = all(
        closure(X, frozenset({g})) == {g} for g in everything if is_compact(X, frozenset({g}))
    )
    containment_closed = all(
        closure(X, O) <= N for O in X.basis for N in X.basis if compact_containment(X, O, N)
    )
    clauses = {
        "hausdorff": hausdorff,
        "compact_sets_closed": compact_closed,
        "compact_containment_closed": containment_closed,
    }
    if is_t0(X) and is_locally_compact(X):
        errors.ensure(len(set(clauses.values())) == 1, "Hausdorff characterizations agree")
    else:
        logger.warning(f"Hausdorff characterizations not asserted on {X!r}: not T0.")
    return clauses


def is_homeomorphism(X: FiniteSpace, Y: FiniteSpace, mapping: t.Mapping[str, str]) -> bool:
    """Whether the point bijection ``mapping`` carries minimal neighbourhoods onto each other."""
    if sorted(mapping) != sorted(X.points) or sorted(mapping.values()) != sorted(Y.points):
        return False
    for g in X.points:
        image = {mapping[h] for h in minimal_neighbourhood(X, g)}
        if image != set(minimal_neighbourhood(Y, mapping[g])):
            return False
    return True


@functools.lru_cache(maxsize=256)
def inclusion_poset(X: FiniteSpace) -> FinitePoset:
    """Order the basis sets of ``X`` by inclusion with ``{}`` as the minimum."""
    sets = X.basis
    leq = np.array([[O <= N for N in sets] for O in sets], dtype=bool)
    return order.poset_from_matrix([X.label(B) for B in sets], leq, X.label(()))


def basis_to_poset(X: FiniteSpace) -> FinitePoset:
    """Order the basis sets of a ∪-basis by inclusion with ``{}`` as the minimum.

    The derived relations are checked against the space: rather below is compact containment
    and the Hausdorff relation holds exactly when the union is a Hausdorff subset.

    :raises stonework.errors.NotAUnionBasis: If the basis is not a ∪-basis.
    """
    ok, witness = is_union_basis(X)
    if not ok:
        raise errors.NotAUnionBasis(f"basis of {X!r} is not a ∪-basis at {witness}")
    sets = X.basis
    P = inclusion_poset(X)

    rels = relations.derived(P)
    for i, O in enumerate(sets):
        for j, N in enumerate(sets):
            witness_pair = (P.elements[i], P.elements[j])
            errors.ensure(
                bool(rels.prec.rel[i, j]) == compact_containment(X, O, N),
                "rather below is compact containment",
                witness_pair,
            )
            errors.ensure(
                bool(rels.smile.rel[i, j]) == is_hausdorff_subset(X, O | N),
                "Hausdorff relation is a Hausdorff union",
                witness_pair,
            )
    errors.ensure(axioms.classify(P).flags["smile_basic"], "∪-bases are smile basic")
    logger.info(f"Built {P!r} from the basis of {X!r}.")
    return P


class NoWitnessNeeded(enum.Enum):
    """Returned by :func:`abc_witness` when ``a`` is rather below a finite join from ``C``."""

    TOKEN = "no witness needed"


@dataclasses.dataclass(frozen=True)
class DualityWitness:
    """Correspondence between a basic poset and its ultrafilter space.

    :param poset: The poset.
    :param ultrafilters: Point id to ultrafilter.
    :param set_map: Poset element id to the point ids of ``O_a``.
    """

    poset: FinitePoset
    ultrafilters: t.Dict[str, FilterSet]
    set_map: t.Dict[str, t.Tuple[str, ...]]

    def as_dict(self) -> t.Dict[str, t.Any]:
        return {
            "points": {g: list(U.ids()) for g, U in self.ultrafilters.items()},
            "set_map": {a: list(points) for a, points in self.set_map.items()},
        }


def _check_duality(P: FinitePoset, X: FiniteSpace, opens: t.Sequence[PointSet]) -> None:
    rels = relations.derived(P)
    joins = P.join_table
    for a, b in itertools.product(range(P.size), repeat=2):
        pair = (P.elements[a], P.elements[b])
        Oa, Ob = opens[a], opens[b]
        if joins[a, b] != order.ABSENT:
            errors.ensure(opens[joins[a, b]] == Oa | Ob, "join is union", pair)
        errors.ensure(bool(rels.perp.rel[a, b]) == (not Oa & Ob), "disjoint iff perp", pair)
        errors.ensure(bool(P.leq[a, b]) == (Oa <= Ob), "order is inclusion", pair)
        errors.ensure(
            bool(rels.smile.rel[a, b]) == is_hausdorff_subset(X, Oa | Ob),
            "Hausdorff relation is a Hausdorff union",
            pair,
        )
        errors.ensure(
            bool(rels.prec.rel[a, b]) == compact_containment(X, Oa, Ob),
            "rather below is compact containment",
            pair,
        )
    errors.ensure(is_locally_compact(X) and is_locally_hausdorff(X), "ultrafilter space is LCLH")


def ultrafilter_space(P: FinitePoset) -> t.Tuple[FiniteSpace, DualityWitness]:
    """Build the space of ``≺``-ultrafilters with basis ``O_a = {U : a ∈ U}``.

    :raises stonework.errors.NotBasic: If ``P`` is not a basic poset.
    :raises stonework.errors.ConsistencyError: If the dual space breaks a duality identity.
    """
    classification = axioms.classify(P)
    if not classification.flags["basic_poset"]:
        raise errors.NotBasic(f"{P!r} is not a basic poset")
    ultrafilters = filters.enumerate_prec_ultrafilters(P)
    points = [U.label for U in ultrafilters]
    opens = [
        frozenset(i for i, U in enumerate(ultrafilters) if a in U.members) for a in range(P.size)
    ]

    failure = _basis_failure(len(points), sorted(set(opens), key=sorted))
    errors.ensure(failure is None, "sets O_a form a basis", failure or ())
    X = space(points, [[points[i] for i in sorted(O)] for O in opens])
    _check_duality(P, X, opens)
    if classification.flags["smile_basic"]:
        errors.ensure(is_union_basis(X)[0], "smile basic posets give a ∪-basis")

    witness = DualityWitness(
        poset=P,
        ultrafilters=dict(zip(points, ultrafilters)),
        set_map={P.elements[a]: X.ids(O) for a, O in enumerate(opens)},
    )
    logger.info(f"Ultrafilter space of {P!r} is {X!r}.")
    return X, witness


def _point_filter(X: FiniteSpace, P: FinitePoset, g: int) -> FilterSet:
    members = [a for a, B in enumerate(X.basis) if g in B]
    return FilterSet(base=P, rel="prec", members=tuple(members))


def round_trip_space(X: FiniteSpace) -> bool:
    """Whether ``g ↦ U_g`` is a homeomorphism onto the ultrafilter space of the basis poset."""
    P = basis_to_poset(X)
    Y, witness = ultrafilter_space(P)
    by_members = {U.members: g for g, U in witness.ultrafilters.items()}
    mapping = {}
    for g in range(X.size):
        U = _point_filter(X, P, g)
        if U.members not in by_members:
            logger.info(f"Point {X.points[g]!r} gives {U!r}, which is not an ultrafilter.")
            return False
        mapping[X.points[g]] = by_members[U.members]
    result = is_homeomorphism(X, Y, mapping)
    logger.info(f"Space round trip for {X!r}: {result}.")
    return result


def round_trip_poset(P: FinitePoset) -> bool:
    """Whether ``a ↦ O_a`` is an order isomorphism onto the basis poset of the dual space.

    :raises stonework.errors.NotBasic: If ``P`` is not smile basic.
    """
    if not axioms.classify(P).flags["smile_basic"]:
        raise errors.NotBasic(f"{P!r} is not smile basic")
    X, witness = ultrafilter_space(P)
    Q = basis_to_poset(X)
    image = [Q.index(X.label(X.subset(witness.set_map[a]))) for a in P.elements]
    if len(set(image)) != P.size or len(image) != Q.size:
        return False
    result = bool((P.leq == Q.leq[np.ix_(image, image)]).all())
    logger.info(f"Poset round trip for {P!r}: {result}.")
    return result


def abc_witness(
    P: FinitePoset, a: str, b: str, C: t.Iterable[str]
) -> t.Union[FilterSet, NoWitnessNeeded]:
    """Find an ultrafilter in the closure of ``O_a`` and in ``O_b`` but in no ``O_c``.

    Such a point exists unless ``a`` is rather below the join of a finite subset of ``C``.

    :raises stonework.errors.PreconditionError: Unless ``a ≺ b``.
    :raises stonework.errors.LemmaViolated: If no such ultrafilter exists.
    """
    X, witness = ultrafilter_space(P)
    rels = relations.derived(P)
    ia, ib = P.index(a), P.index(b)
    if not rels.prec.rel[ia, ib]:
        raise errors.PreconditionError(f"{a!r} is not rather below {b!r}")
    cover = sorted({P.index(c) for c in C})
    cap = config.StoneworkConfig().oracle_cap
    if len(cover) > cap:
        raise errors.CarrierTooLarge(len(cover), cap, "cover")

    for k in range(len(cover) + 1):
        for F in itertools.combinations(cover, k):
            mask = np.zeros(P.size, dtype=bool)
            mask[list(F)] = True
            join = order.join_of(P, mask)
            if join is not None and rels.prec.rel[ia, join]:
                logger.debug(f"{a!r} is rather below the join of {P.ids(F)}.")
                return NoWitnessNeeded.TOKEN

    Oa = X.subset(witness.set_map[a])
    Ob = X.subset(witness.set_map[b])
    covered = frozenset().union(*(X.subset(witness.set_map[P.elements[c]]) for c in cover))
    candidates = sorted((closure(X, Oa) & Ob) - covered)
    if not candidates:
        raise errors.LemmaViolated("closure of O_a meets O_b outside the cover", (a, b))
    return witness.ultrafilters[X.points[candidates[0]]]
