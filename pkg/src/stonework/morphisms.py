"""Basic morphisms between basic posets and partial continuous maps between their spaces.

A relation ``⊏`` from ``S`` to ``S'`` is a basic morphism when it is faithful, auxiliary, pushes
rather below pairs forward and pulls joins back. It is a basic ∨-morphism when it also preserves
joins, is determined by what lies rather below and relates the minimum to everything.
"""
import dataclasses
import itertools
import logging
import typing as t

import numpy as np

from . import axioms, errors, filters, order, relations, topology
from .axioms import AxiomReport
from .order import ABSENT, BoolMatrix, FinitePoset, through
from .topology import FiniteSpace, PointSet


logger = logging.getLogger(__name__)

BASIC_CLAUSES = ("faithful", "auxiliarity", "pushforward", "vee_pullback")
VEE_CLAUSES = ("vee_preserving", "lower_relation", "bottom")
CLAUSES = BASIC_CLAUSES + VEE_CLAUSES

Witness = t.Optional[t.Tuple[int, ...]]


def _first(viol: np.ndarray) -> Witness:
    found = np.argwhere(viol)
    return tuple(int(i) for i in found[0]) if found.size else None


def _counts(*matrices: np.ndarray) -> t.List[np.ndarray]:
    return [m.astype(np.float32) for m in matrices]


def _faithful(S: FinitePoset, T: FinitePoset, R: BoolMatrix) -> Witness:
    viol = R[:, T.zero].copy()
    viol[S.zero] = False
    return _first(viol)


def _auxiliarity(S: FinitePoset, T: FinitePoset, R: BoolMatrix) -> Witness:
    return _first(through(through(S.leq, R), T.leq) & ~R)


def _pushforward(S: FinitePoset, T: FinitePoset, R: BoolMatrix) -> Witness:
    prec, prec_t, rel = _counts(relations.derived(S).prec.rel, relations.derived(T).prec.rel, R)
    # [a, c', d']
    given = np.einsum("ab,bc,bd->acd", prec, rel, rel) > 0.5
    found = np.einsum("ab,bc,bd->acd", rel, prec_t, prec_t) > 0.5
    return _first(given & ~found)


def _vee_pullback(S: FinitePoset, T: FinitePoset, R: BoolMatrix) -> Witness:
    prec = relations.derived(S).prec.rel
    joins, joins_t = S.join_table, T.join_table
    reach = through(prec, R)
    present_t = joins_t != ABSENT
    given = present_t[None, :, :] & reach[:, np.where(present_t, joins_t, 0)]
    present = joins != ABSENT
    below_join = present[None, :, :] & prec[:, np.where(present, joins, 0)]
    weights, rel = _counts(below_join, R)
    found = np.einsum("acd,cx,dy->axy", weights, rel, rel, optimize=True) > 0.5
    return _first(given & ~found)


def _vee_preserving(S: FinitePoset, T: FinitePoset, R: BoolMatrix) -> Witness:
    joins, joins_t = S.join_table, T.join_table
    present_t = joins_t != ABSENT
    safe_t = np.where(present_t, joins_t, 0)
    for a, b in np.argwhere(joins != ABSENT):
        # [a', b']
        viol = R[a][:, None] & R[b][None, :] & present_t & ~R[joins[a, b]][safe_t]
        found = _first(viol)
        if found is not None:
            return (int(a), int(b)) + found
    return None


def _lower_relation(S: FinitePoset, T: FinitePoset, R: BoolMatrix) -> Witness:
    prec = relations.derived(S).prec.rel
    determined = ~through(prec.T, ~R)
    return _first(determined & ~R)


def _bottom(S: FinitePoset, T: FinitePoset, R: BoolMatrix) -> Witness:
    return _first(~R[S.zero])


_CHECKS: t.Dict[str, t.Tuple[t.Callable[[FinitePoset, FinitePoset, BoolMatrix], Witness], str]] = {
    "faithful": (_faithful, "s"),
    "auxiliarity": (_auxiliarity, "st"),
    "pushforward": (_pushforward, "stt"),
    "vee_pullback": (_vee_pullback, "stt"),
    "vee_preserving": (_vee_preserving, "sstt"),
    "lower_relation": (_lower_relation, "st"),
    "bottom": (_bottom, "t"),
}


def _evaluate(S: FinitePoset, T: FinitePoset, R: BoolMatrix, clause: str) -> AxiomReport:
    check, axes = _CHECKS[clause]
    found = check(S, T, R)
    if found is None:
        return AxiomReport(axiom=clause, holds=True)
    posets = {"s": S, "t": T}
    witness = tuple(posets[axis].elements[i] for axis, i in zip(axes, found))
    return AxiomReport(axiom=clause, holds=False, witness=witness)


@dataclasses.dataclass(frozen=True, eq=False)
class BasicMorphismRel:
    """A relation between two posets with the outcome of every morphism clause.

    :param rel: ``rel[a, a']`` iff ``a ⊏ a'``.
    :param clauses: One report per clause id in :data:`CLAUSES`.
    """

    source: FinitePoset
    target: FinitePoset
    rel: BoolMatrix
    clauses: t.Dict[str, AxiomReport]

    @property
    def is_basic(self) -> bool:
        return all(self.clauses[c].holds for c in BASIC_CLAUSES)

    @property
    def is_vee(self) -> bool:
        return self.is_basic and all(self.clauses[c].holds for c in VEE_CLAUSES)

    def pairs(self) -> t.List[t.Tuple[str, str]]:
        return [
            (self.source.elements[a], self.target.elements[b]) for a, b in np.argwhere(self.rel)
        ]

    def as_dict(self) -> t.Dict[str, t.Any]:
        return {
            "kind": "morphism",
            "pairs": [list(pair) for pair in self.pairs()],
            "is_basic": self.is_basic,
            "is_vee": self.is_vee,
            "clauses": {k: v.as_dict() for k, v in self.clauses.items()},
        }

    def __repr__(self) -> str:
        return (
            f"BasicMorphismRel({self.source.size}x{self.target.size}, pairs={int(self.rel.sum())}, "
            f"basic={self.is_basic}, vee={self.is_vee})"
        )


def morphism_from_matrix(S: FinitePoset, T: FinitePoset, rel: np.ndarray) -> BasicMorphismRel:
    """Evaluate every clause on a relation given as a boolean matrix."""
    R = order.frozen(rel)
    if R.shape != (S.size, T.size):
        raise errors.SchemaError("<morphism>", "pairs", f"expected a {S.size} x {T.size} relation")
    m = BasicMorphismRel(
        source=S, target=T, rel=R, clauses={c: _evaluate(S, T, R, c) for c in CLAUSES}
    )
    logger.debug(f"Evaluated {m!r}.")
    return m


def validate_morphism(
    pairs: t.Iterable[t.Sequence[str]], S: FinitePoset, T: FinitePoset
) -> BasicMorphismRel:
    """Build ``⊏`` from ``[a, a']`` pairs and report each clause.

    Failing clauses are reported with witnesses, never raised.

    :raises stonework.errors.UnknownElement: If a pair names an unknown element.
    """
    rel = np.zeros((S.size, T.size), dtype=bool)
    for pair in pairs:
        if len(pair) != 2:
            raise errors.SchemaError("<morphism>", "pairs", "entries are [a, a']")
        rel[S.index(pair[0]), T.index(pair[1])] = True
    return morphism_from_matrix(S, T, rel)


def identity_morphism(P: FinitePoset) -> BasicMorphismRel:
    return morphism_from_matrix(P, P, P.leq)


def empty_morphism(S: FinitePoset, T: FinitePoset) -> BasicMorphismRel:
    return morphism_from_matrix(S, T, np.zeros((S.size, T.size), dtype=bool))


def check_clause(m: BasicMorphismRel, clause: str) -> AxiomReport:
    """Re-evaluate one clause and compare it with the stored report.

    :raises stonework.errors.UnknownAxiom: For an unknown clause id.
    """
    if clause not in _CHECKS:
        raise errors.UnknownAxiom(f"unknown morphism clause {clause!r}")
    report = _evaluate(m.source, m.target, m.rel, clause)
    errors.ensure(report == m.clauses[clause], f"stored clause {clause} is reproducible")
    return report


def _is_basic(P: FinitePoset) -> bool:
    return axioms.classify(P).flags["basic_poset"]


def _antichains(P: FinitePoset, candidates: np.ndarray) -> t.Iterator[t.Tuple[int, ...]]:
    pool = [int(c) for c in np.flatnonzero(candidates)]
    comparable = P.leq | P.leq.T

    def extend(start: int, chosen: t.Tuple[int, ...]) -> t.Iterator[t.Tuple[int, ...]]:
        yield chosen
        for k in range(start, len(pool)):
            c = pool[k]
            if not comparable[c, list(chosen)].any():
                yield from extend(k + 1, chosen + (c,))

    return extend(0, ())


def finite_joins(P: FinitePoset, candidates: np.ndarray) -> np.ndarray:
    """Mask of every existing ``⋁F`` for finite ``F`` inside ``candidates``.

    Only antichains are joined since ``⋁F`` depends on the maximal members of ``F`` alone.
    """
    out = np.zeros(P.size, dtype=bool)
    for F in _antichains(P, candidates):
        mask = np.zeros(P.size, dtype=bool)
        mask[list(F)] = True
        join = order.join_of(P, mask)
        if join is not None:
            out[join] = True
    return out


def extension(S: FinitePoset, T: FinitePoset, R: BoolMatrix) -> BoolMatrix:
    """``a ⊑ a'`` iff every ``b ≺ a`` is rather below ``⋁F`` for some finite ``F ⊏ a'``."""
    prec = relations.derived(S).prec.rel
    ext = np.zeros((S.size, T.size), dtype=bool)
    for target in range(T.size):
        covered = prec[:, finite_joins(S, R[:, target])].any(axis=1)
        ext[:, target] = ~(prec.T & ~covered[None, :]).any(axis=1)
    return order.frozen(ext)


def closure(m: BasicMorphismRel) -> BasicMorphismRel:
    """Extend ``⊏`` to ``⊑``.

    :raises stonework.errors.ConsistencyError: If ``⊏`` is not contained in ``⊑``, if a basic
        ∨-morphism between basic posets is changed, or if the extension of a basic morphism
        between basic posets is not a basic ∨-morphism.
    """
    ext = extension(m.source, m.target, m.rel)
    errors.ensure(not (m.rel & ~ext).any(), "relation is contained in its extension")
    result = morphism_from_matrix(m.source, m.target, ext)
    if _is_basic(m.source) and _is_basic(m.target):
        if m.is_vee:
            errors.ensure(bool((ext == m.rel).all()), "basic ∨-morphisms are closed")
        if m.is_basic:
            errors.ensure(result.is_vee, "extensions of basic morphisms are basic ∨-morphisms")
    return result


def _same_poset(P: FinitePoset, Q: FinitePoset) -> bool:
    return P is Q or (
        P.elements == Q.elements and P.zero == Q.zero and bool((P.leq == Q.leq).all())
    )


def compose(m1: BasicMorphismRel, m2: BasicMorphismRel, *, close: bool = False) -> BasicMorphismRel:
    """Compose relations, ``a (⊏∘⊏') a''`` iff ``a ⊏ a' ⊏' a''`` for some ``a'``.

    Composites of basic morphisms between basic posets are asserted to be basic. Whether a
    composite of basic ∨-morphisms is again one is only reported.

    :param close: Apply :func:`closure` to the composite.
    :raises stonework.errors.SourceTargetMismatch: If ``m2`` does not start where ``m1`` ends.
    """
    if not _same_poset(m1.target, m2.source):
        raise errors.SourceTargetMismatch(f"{m1!r} does not end where {m2!r} starts")
    result = morphism_from_matrix(m1.source, m2.target, through(m1.rel, m2.rel))
    posets = (m1.source, m1.target, m2.target)
    if m1.is_basic and m2.is_basic and all(_is_basic(P) for P in posets):
        errors.ensure(result.is_basic, "composites of basic morphisms are basic")
    if m1.is_vee and m2.is_vee and not result.is_vee:
        failing = [c for c in VEE_CLAUSES if not result.clauses[c].holds]
        logger.warning(f"Composite of basic ∨-morphisms fails {failing}.")
    return closure(result) if close else result


@dataclasses.dataclass(frozen=True, eq=False)
class PartialMap:
    """A map from part of ``source`` to ``target``, by point index."""

    source: FiniteSpace
    target: FiniteSpace
    mapping: t.Dict[int, int]

    @property
    def domain(self) -> PointSet:
        return frozenset(self.mapping)

    def preimage(self, B: PointSet) -> PointSet:
        return frozenset(g for g, h in self.mapping.items() if h in B)

    def as_dict(self) -> t.Dict[str, t.Any]:
        return {
            "kind": "partial_map",
            "source": self.source.as_dict(),
            "target": self.target.as_dict(),
            "map": {
                self.source.points[g]: self.target.points[h]
                for g, h in sorted(self.mapping.items())
            },
        }

    def __repr__(self) -> str:
        return f"PartialMap(domain={len(self.mapping)}/{self.source.size}, target={self.target!r})"


def partial_map(X: FiniteSpace, Y: FiniteSpace, mapping: t.Mapping[str, str]) -> PartialMap:
    return PartialMap(
        source=X, target=Y, mapping={X.index(g): Y.index(h) for g, h in mapping.items()}
    )


def is_continuous(phi: PartialMap) -> bool:
    """Whether the preimage of every basis set of the target is open in the domain."""
    X, domain = phi.source, phi.domain
    for B in phi.target.basis:
        pre = phi.preimage(B)
        for g in pre:
            if not frozenset(np.flatnonzero(X.neighbourhoods[g]).tolist()) & domain <= pre:
                return False
    return True


def _same_space(X: FiniteSpace, Y: FiniteSpace) -> bool:
    return X is Y or (X.points == Y.points and set(X.basis) == set(Y.basis))


def compose_maps(phi: PartialMap, psi: PartialMap) -> PartialMap:
    """``psi ∘ phi`` on ``{g in dom phi : phi(g) in dom psi}``."""
    if not _same_space(phi.target, psi.source):
        raise errors.SourceTargetMismatch(f"{phi!r} does not end where {psi!r} starts")
    mapping = {g: psi.mapping[h] for g, h in phi.mapping.items() if h in psi.mapping}
    return PartialMap(source=phi.source, target=psi.target, mapping=mapping)


def enumerate_partial_maps(X: FiniteSpace, Y: FiniteSpace) -> t.Iterator[PartialMap]:
    """Every continuous map from an open subset of ``X`` to ``Y``."""
    for D in X.opens:
        points = sorted(D)
        for images in itertools.product(range(Y.size), repeat=len(points)):
            phi = PartialMap(source=X, target=Y, mapping=dict(zip(points, images)))
            if is_continuous(phi):
                yield phi


def _meet(X: FiniteSpace, members: t.Iterable[int]) -> PointSet:
    result = frozenset(range(X.size))
    for a in members:
        result &= X.basis[a]
    return result


def _check_point_recovery(phi: PartialMap, m: BasicMorphismRel) -> None:
    X, Y = phi.source, phi.target
    interior = topology.interior(X, phi.domain)
    for U in filters.enumerate_prec_ultrafilters(m.source):
        point = _meet(X, U.members)
        errors.ensure(len(point) == 1, "ultrafilters meet in one point", (U.label,))
        (g,) = point
        image = np.flatnonzero(m.rel[U.mask].any(axis=0))
        defined = (g in interior) == bool(image.size)
        errors.ensure(defined, "defined exactly on the domain interior", (U.label,))
        if image.size:
            errors.ensure(
                _meet(Y, image) == {phi.mapping[g]}, "images meet in the image point", (U.label,)
            )


def from_partial_map(phi: PartialMap, *, require_union_basis: bool = True) -> BasicMorphismRel:
    """Relate basis sets by ``a ⊏ a'`` iff ``a ⊆ phi⁻¹[a']``.

    With ∪-bases on both sides the result is asserted to be a basic ∨-morphism that recovers
    ``phi`` on ultrafilters. Other bases, such as bisections, are related without assertions.

    :raises stonework.errors.NotAUnionBasis: If a basis is not a ∪-basis and one is required.
    :raises stonework.errors.DomainNotOpen: If the domain is not open.
    :raises stonework.errors.NotContinuous: If a preimage of a basis set is not open.
    """
    X, Y = phi.source, phi.target
    if require_union_basis:
        for Z in (X, Y):
            ok, witness = topology.is_union_basis(Z)
            if not ok:
                raise errors.NotAUnionBasis(f"basis of {Z!r} is not a ∪-basis at {witness}")
    if not topology.is_open(X, phi.domain):
        raise errors.DomainNotOpen(f"domain {X.label(phi.domain)} of {phi!r} is not open")
    if not is_continuous(phi):
        raise errors.NotContinuous(f"{phi!r} is not continuous")
    S, T = topology.inclusion_poset(X), topology.inclusion_poset(Y)
    rel = np.array([[O <= phi.preimage(N) for N in Y.basis] for O in X.basis], dtype=bool)
    m = morphism_from_matrix(S, T, rel)
    if require_union_basis:
        failing = [m.clauses[c] for c in CLAUSES if not m.clauses[c].holds]
        errors.ensure(
            not failing,
            "continuous maps give basic ∨-morphisms",
            failing[0].witness or () if failing else (),
        )
        _check_point_recovery(phi, m)
    logger.info(f"Relation of {phi!r} is {m!r}.")
    return m


def to_partial_map(m: BasicMorphismRel) -> PartialMap:
    """Map each ultrafilter ``U`` with ``U^⊏`` nonempty to ``U^⊏``.

    Continuity, the totality criterion and ``a ⊑ a' ⇔ O_a ⊆ phi⁻¹[O_a']`` are asserted.

    :raises stonework.errors.NotBasicMorphism: Unless ``m`` is a basic morphism.
    :raises stonework.errors.NotBasic: Unless both posets are basic.
    """
    if not m.is_basic:
        failing = [c for c in BASIC_CLAUSES if not m.clauses[c].holds]
        raise errors.NotBasicMorphism(f"{m!r} fails {failing}")
    X, source_witness = topology.ultrafilter_space(m.source)
    Y, target_witness = topology.ultrafilter_space(m.target)
    targets = {U.members: Y.index(label) for label, U in target_witness.ultrafilters.items()}

    mapping = {}
    for label, U in source_witness.ultrafilters.items():
        image = m.rel[U.mask].any(axis=0)
        if not image.any():
            continue
        members = tuple(int(i) for i in np.flatnonzero(image))
        errors.ensure(members in targets, "images of ultrafilters are ultrafilters", (label,))
        mapping[X.index(label)] = targets[members]
    phi = PartialMap(source=X, target=Y, mapping=mapping)
    errors.ensure(topology.is_open(X, phi.domain), "induced domain is open")
    errors.ensure(is_continuous(phi), "induced map is continuous")

    prec = relations.derived(m.source).prec.rel
    cofinal = bool(prec[:, finite_joins(m.source, m.rel.any(axis=1))].any(axis=1).all())
    errors.ensure(cofinal == (len(mapping) == X.size), "totality iff cofinality")

    ext = extension(m.source, m.target, m.rel)
    opens = {a: X.subset(points) for a, points in source_witness.set_map.items()}
    opens_t = {a: Y.subset(points) for a, points in target_witness.set_map.items()}
    for (i, a), (j, b) in itertools.product(
        enumerate(m.source.elements), enumerate(m.target.elements)
    ):
        errors.ensure(
            bool(ext[i, j]) == (opens[a] <= phi.preimage(opens_t[b])),
            "extension is preimage inclusion",
            (a, b),
        )
    logger.info(f"Map of {m!r} is {phi!r}.")
    return phi


def point_bijection(X: FiniteSpace) -> t.Dict[str, str]:
    """Send each point ``g`` to the label of ``U_g`` in the ultrafilter space of its basis."""
    P = topology.inclusion_poset(X)
    labels = {U.members: U.label for U in filters.enumerate_prec_ultrafilters(P)}
    result = {}
    for g in range(X.size):
        members = tuple(a for a, B in enumerate(X.basis) if g in B)
        errors.ensure(members in labels, "point filters are ultrafilters", (X.points[g],))
        result[X.points[g]] = labels[members]
    return result


def map_round_trip(phi: PartialMap) -> bool:
    """Whether mapping ``phi`` to a relation and back returns ``phi``.

    Points are matched through :func:`point_bijection`.
    """
    psi = to_partial_map(from_partial_map(phi))
    on_source, on_target = point_bijection(phi.source), point_bijection(phi.target)
    expected = {
        psi.source.index(on_source[phi.source.points[g]]): psi.target.index(
            on_target[phi.target.points[h]]
        )
        for g, h in phi.mapping.items()
    }
    result = expected == psi.mapping
    logger.info(f"Map round trip for {phi!r}: {result}.")
    return result


def composition_commutes(phi: PartialMap, psi: PartialMap) -> bool:
    """Whether relating ``psi ∘ phi`` agrees with composing the relations of both maps.

    ``U^(⊏∘⊏') = (U^⊏)^⊏'`` is asserted for every ultrafilter ``U``.
    """
    first, second = from_partial_map(phi), from_partial_map(psi)
    composite = compose(first, second)
    for U in filters.enumerate_prec_ultrafilters(first.source):
        direct = composite.rel[U.mask].any(axis=0)
        stepwise = second.rel[first.rel[U.mask].any(axis=0)].any(axis=0)
        errors.ensure(bool((direct == stepwise).all()), "images compose", (U.label,))
    result = bool((composite.rel == from_partial_map(compose_maps(phi, psi)).rel).all())
    logger.info(f"Composition of {phi!r} and {psi!r} commutes: {result}.")
    return result
