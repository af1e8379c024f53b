"""Finite inverse semigroups with zero and their natural order.

Partial bijections compose left to right: ``(ab)(x) = b(a(x))``.
"""
import dataclasses
import functools
import itertools
import logging
import typing as t

import numpy as np

from . import axioms, config, errors, order, relations
from .axioms import AxiomReport
from .order import ABSENT, BoolMatrix, FinitePoset, IndexMatrix
from .relations import RelationKind, RelationMatrix


logger = logging.getLogger(__name__)

PartialBijection = t.Mapping[int, int]


@dataclasses.dataclass(frozen=True, eq=False)
class FiniteInverseSemigroup(order.Order):
    """A Cayley table with inverses and a zero, all stored by index.

    ``leq`` holds the natural partial order so the semigroup doubles as an :class:`Order`.
    """

    mult: IndexMatrix
    inv: IndexMatrix
    zero: int = 0

    @functools.cached_property
    def idempotent_mask(self) -> BoolMatrix:
        return t.cast(BoolMatrix, order.frozen(np.diag(self.mult) == np.arange(self.size)))

    def product(self, a: str, b: str) -> str:
        return self.elements[self.mult[self.index(a), self.index(b)]]

    def inverse(self, a: str) -> str:
        return self.elements[self.inv[self.index(a)]]

    @functools.cached_property
    def source(self) -> IndexMatrix:
        """``source[a]`` is ``a⁻¹a``."""
        return t.cast(IndexMatrix, order.frozen(self.mult[self.inv, np.arange(self.size)], int))

    @functools.cached_property
    def target(self) -> IndexMatrix:
        """``target[a]`` is ``aa⁻¹``."""
        return t.cast(IndexMatrix, order.frozen(self.mult[np.arange(self.size), self.inv], int))

    def as_dict(self) -> t.Dict[str, t.Any]:
        return {
            "kind": "isg",
            "elements": list(self.elements),
            "mult": [list(self.ids(row)) for row in self.mult],
            "inv": list(self.ids(self.inv)),
            "zero": self.elements[self.zero],
        }

    def __repr__(self) -> str:
        return f"FiniteInverseSemigroup(size={self.size}, zero={self.elements[self.zero]!r})"


def _natural_order(mult: IndexMatrix, inv: IndexMatrix) -> BoolMatrix:
    """``a <= b`` iff ``a = eb`` for an idempotent ``e``."""
    n = mult.shape[0]
    leq = np.zeros((n, n), dtype=bool)
    for e in np.flatnonzero(np.diag(mult) == np.arange(n)):
        leq[mult[e], np.arange(n)] = True
    # a <= b iff a = (aa⁻¹)b
    target = mult[np.arange(n), inv]
    errors.ensure(
        bool((leq == (mult[target] == np.arange(n)[:, None])).all()),
        "natural order is a = aa⁻¹b",
    )
    return leq


def validate_isg(
    elements: t.Sequence[str],
    mult: t.Sequence[t.Sequence[str]],
    inv: t.Sequence[str],
    zero: str,
    *,
    cap: t.Optional[int] = None,
) -> FiniteInverseSemigroup:
    """Validate a Cayley table as an inverse semigroup with zero.

    Inverses are checked with ``a a⁻¹ a = a`` and ``a⁻¹ a a⁻¹ = a⁻¹`` together with
    commuting idempotents.

    :raises stonework.errors.NotAssociative: With the first failing triple.
    :raises stonework.errors.NotInverse: With the element or idempotent pair at fault.
    :raises stonework.errors.NoZero: If ``zero`` does not annihilate some element.
    """
    limit = config.StoneworkConfig().cap if cap is None else cap
    if len(elements) > limit:
        raise errors.CarrierTooLarge(len(elements), limit, "semigroup")
    if len(set(elements)) != len(elements):
        raise errors.SchemaError("<isg>", "elements", "element ids must be unique")
    positions = {element: i for i, element in enumerate(elements)}
    n = len(elements)
    if len(mult) != n or any(len(row) != n for row in mult):
        raise errors.SchemaError("<isg>", "mult", f"expected a {n} x {n} table")
    if len(inv) != n:
        raise errors.SchemaError("<isg>", "inv", f"expected {n} entries")
    try:
        M = np.array([[positions[c] for c in row] for row in mult], dtype=np.int64)
        I = np.array([positions[c] for c in inv], dtype=np.int64)
        z = positions[zero]
    except KeyError as exc:
        raise errors.UnknownElement(f"unknown element id: {exc.args[0]!r}") from None

    broken = M[M] != M[:, M]
    if broken.any():
        a, b, c = np.argwhere(broken)[0]
        raise errors.NotAssociative((elements[a], elements[b], elements[c]))

    everything = np.arange(n)
    regular = (M[M[everything, I], everything] == everything) & (M[M[I, everything], I] == I)
    if not regular.all():
        a = int(np.flatnonzero(~regular)[0])
        raise errors.NotInverse((elements[a],), f"{elements[a]!r} is not regular for its inverse")
    idempotents = np.flatnonzero(np.diag(M) == everything)
    block = M[np.ix_(idempotents, idempotents)]
    if (block != block.T).any():
        e, f = np.argwhere(block != block.T)[0]
        pair = (elements[idempotents[e]], elements[idempotents[f]])
        raise errors.NotInverse(pair, f"idempotents {pair} do not commute")

    annihilated = (M[z] == z) & (M[:, z] == z)
    if not annihilated.all():
        raise errors.NoZero((zero, elements[int(np.flatnonzero(~annihilated)[0])]))

    S = FiniteInverseSemigroup(
        elements=tuple(elements),
        leq=order.frozen(_natural_order(M, I)),
        mult=order.frozen(M, np.int64),
        inv=order.frozen(I, np.int64),
        zero=z,
    )
    logger.debug(f"Validated {S!r}.")
    return S


def from_partial_bijections(
    named: t.Mapping[str, PartialBijection], *, cap: t.Optional[int] = None
) -> FiniteInverseSemigroup:
    """Build the semigroup of the given partial bijections.

    :raises stonework.errors.StructureError: If the family is not closed under composition
        and inversion or lacks the empty map.
    """
    keys = {frozenset(f.items()): name for name, f in named.items()}
    names = list(named)

    def lookup(pairs: t.Iterable[t.Tuple[int, int]], witness: t.Tuple[str, ...]) -> str:
        try:
            return keys[frozenset(pairs)]
        except KeyError:
            raise errors.StructureError(witness, f"not closed at {witness}") from None

    mult = [[lookup(_then(named[a], named[b]), (a, b)) for b in names] for a in names]
    inv = [lookup(((y, x) for x, y in named[a].items()), (a,)) for a in names]
    zero = lookup((), ())
    return validate_isg(names, mult, inv, zero, cap=cap)


def _then(f: PartialBijection, g: PartialBijection) -> t.Iterator[t.Tuple[int, int]]:
    """The pairs of ``f`` followed by ``g``."""
    return ((x, g[y]) for x, y in f.items() if y in g)


def bijection_id(f: PartialBijection) -> str:
    """``"0"`` for the empty map, otherwise the pairs ``xy`` joined by commas."""
    return ",".join(f"{x}{y}" for x, y in sorted(f.items())) or "0"


def symmetric_inverse_monoid(n: int, *, cap: t.Optional[int] = None) -> FiniteInverseSemigroup:
    """All partial bijections of ``{1..n}``, ordered by size."""
    points = range(1, n + 1)
    maps: t.List[t.Dict[int, int]] = []
    for k in range(n + 1):
        for domain in itertools.combinations(points, k):
            for image in itertools.permutations(points, k):
                maps.append(dict(zip(domain, image)))
    return from_partial_bijections({bijection_id(f): f for f in maps}, cap=cap)


def semilattice_of_subsets(n: int) -> FiniteInverseSemigroup:
    """Subsets of ``{1..n}`` under intersection."""
    subsets = [
        frozenset(c) for k in range(n + 1) for c in itertools.combinations(range(1, n + 1), k)
    ]
    ids = ["{" + ",".join(str(x) for x in sorted(s)) + "}" for s in subsets]
    mult = [[ids[subsets.index(s & r)] for r in subsets] for s in subsets]
    return validate_isg(ids, mult, ids, "{}")


def evs_s_joins() -> FiniteInverseSemigroup:
    """Identities on 1, 2, 3 and on all of ``{1..5}``, with the swap of 4 and 5.

    ``e1∨e2`` exists among the idempotents but not in the semigroup.
    """
    identity = {x: x for x in range(1, 6)}
    return from_partial_bijections(
        {
            "0": {},
            "e1": {1: 1},
            "e2": {2: 2},
            "e3": {3: 3},
            "1": identity,
            "s": {**identity, 4: 5, 5: 4},
        }
    )


def two_element_semilattice() -> FiniteInverseSemigroup:
    return validate_isg(["0", "e"], [["0", "0"], ["0", "e"]], ["0", "e"], "0")


def inverse_subsemigroup(
    S: FiniteInverseSemigroup, generators: t.Iterable[str]
) -> FiniteInverseSemigroup:
    """Close ``generators`` and zero under product and inverse."""
    members = {S.zero} | {S.index(g) for g in generators}
    members |= {int(S.inv[a]) for a in members}
    frontier = set(members)
    while frontier:
        fresh = {int(S.mult[a, b]) for a in frontier for b in members}
        fresh |= {int(S.mult[b, a]) for a in frontier for b in members}
        fresh |= {int(S.inv[a]) for a in fresh}
        frontier = fresh - members
        members |= frontier
    keep = sorted(members)
    names = S.ids(keep)
    mult = [[S.elements[S.mult[a, b]] for b in keep] for a in keep]
    inv = [S.elements[S.inv[a]] for a in keep]
    return validate_isg(names, mult, inv, S.elements[S.zero])


def idempotents(S: FiniteInverseSemigroup) -> t.Tuple[str, ...]:
    return S.ids(np.flatnonzero(S.idempotent_mask))


@functools.lru_cache(maxsize=256)
def natural_poset(S: FiniteInverseSemigroup) -> FinitePoset:
    """The natural order as a :class:`FinitePoset` with minimum zero."""
    return order.poset_from_matrix(S.elements, S.leq, S.elements[S.zero], cap=S.size)


@functools.lru_cache(maxsize=256)
def idempotent_poset(S: FiniteInverseSemigroup) -> FinitePoset:
    members = np.flatnonzero(S.idempotent_mask)
    return order.poset_from_matrix(
        S.ids(members), S.leq[np.ix_(members, members)], S.elements[S.zero], cap=S.size
    )


@dataclasses.dataclass(frozen=True, eq=False)
class DerivedOrder:
    """The natural order of a semigroup with compatibility, ``≺≺`` and ``≃``."""

    semigroup: FiniteInverseSemigroup
    poset: FinitePoset
    compat: RelationMatrix
    bi_below: RelationMatrix
    simeq: RelationMatrix


def _compatible(S: FiniteInverseSemigroup) -> BoolMatrix:
    E = S.idempotent_mask
    return t.cast(BoolMatrix, E[S.mult[:, S.inv]] & E[S.mult[S.inv, :]])


@functools.lru_cache(maxsize=256)
def natural_order(S: FiniteInverseSemigroup) -> DerivedOrder:
    """Compute the natural order and the relations built on it.

    :raises stonework.errors.ConsistencyError: If compatibility is not symmetric, does not
        contain the order or is not auxiliary.
    """
    P = natural_poset(S)
    rels = relations.derived(P)
    compat = _compatible(S)
    errors.ensure(bool((compat == compat.T).all()), "compatibility symmetric")
    errors.ensure(not (S.leq & ~compat).any(), "order within compatibility")
    through = order.through(order.through(S.leq, compat), S.leq.T)
    errors.ensure(bool((through == compat).all()), "compatibility auxiliarity")

    bi_below = rels.prec.rel[np.ix_(S.source, S.source)] & S.leq
    simeq = compat & rels.smile.rel
    return DerivedOrder(
        semigroup=S,
        poset=P,
        compat=RelationMatrix(P, RelationKind.COMPATIBLE, order.frozen(compat)),
        bi_below=RelationMatrix(P, RelationKind.BI_BELOW, order.frozen(bi_below)),
        simeq=RelationMatrix(P, RelationKind.SIMEQ, order.frozen(simeq)),
    )


def compatibility(S: FiniteInverseSemigroup) -> RelationMatrix:
    """``a ∼ b`` iff ``ab⁻¹`` and ``a⁻¹b`` are idempotent."""
    return natural_order(S).compat


def bi_below(S: FiniteInverseSemigroup) -> RelationMatrix:
    """``a ≺≺ b`` iff ``a⁻¹a ≺ b⁻¹b`` and ``a <= b``."""
    return natural_order(S).bi_below


def simeq(S: FiniteInverseSemigroup) -> RelationMatrix:
    return natural_order(S).simeq


def _distributivity_failure(
    S: FiniteInverseSemigroup, members: np.ndarray, P: FinitePoset
) -> t.Optional[t.Tuple[str, str, str]]:
    """First ``(a, b, c)`` where multiplying by ``c`` on either side breaks the join ``a∨b``.

    ``members`` index a subsemigroup of ``S`` and ``P`` is its order, so joins are taken there.
    """
    local = np.full(S.size, ABSENT, dtype=np.int64)
    local[members] = np.arange(members.size)
    M = local[S.mult[np.ix_(members, members)]]
    J = P.join_table
    pa, pb = np.nonzero(J != ABSENT)
    pj = J[pa, pb]
    right = J[M[pa], M[pb]] != M[pj]
    left = J[M[:, pa].T, M[:, pb].T] != M[:, pj].T
    failing = right | left
    if not failing.any():
        return None
    i, c = np.argwhere(failing)[0]
    return P.elements[pa[i]], P.elements[pb[i]], P.elements[c]


def distributivity_suite(S: FiniteInverseSemigroup) -> t.Dict[str, t.Any]:
    """Evaluate the four distributivity conditions.

    They agree on conditional ∨-semilattices and this is asserted there only.
    """
    P = natural_poset(S)
    E = idempotent_poset(S)
    e_failure = _distributivity_failure(S, np.flatnonzero(S.idempotent_mask), E)
    s_failure = _distributivity_failure(S, np.arange(S.size), P)
    flags = {
        "E_distributive": e_failure is None,
        "S_distributive": s_failure is None,
        "leq_distributive": axioms.check_axiom(P, "leq_distributivity").holds,
        "leq_decomposition": axioms.check_axiom(P, "leq_decomposition").holds,
    }
    hypothesis = order.conditional_join_failure(P) is None
    if hypothesis:
        errors.ensure(len(set(flags.values())) == 1, "distributivity conditions agree")
    else:
        logger.warning(f"Distributivity equivalence not asserted on {S!r}: hypothesis not met.")
    witnesses = {"E_distributive": e_failure, "S_distributive": s_failure}
    return {
        "flags": flags,
        "conditional_join_semilattice": hypothesis,
        "witnesses": {k: list(v) if v else None for k, v in witnesses.items()},
    }


def semigroup_invariants(S: FiniteInverseSemigroup) -> t.Dict[str, bool]:
    """Check the join/source identity and whether ``E`` and ``S`` agree on joins of idempotents.

    :raises stonework.errors.ConsistencyError: If ``(a∨b)⁻¹(a∨b) = a⁻¹a ∨ b⁻¹b`` fails or if a
        conditional ∨-semilattice computes different joins of idempotents than ``E``.
    """
    natural_order(S)
    P = natural_poset(S)
    J = P.join_table
    for a, b in np.argwhere(J != ABSENT):
        errors.ensure(
            S.source[J[a, b]] == J[S.source[a], S.source[b]],
            "source of a join is the join of sources",
            P.ids((a, b)),
        )
    members = np.flatnonzero(S.idempotent_mask)
    in_e = idempotent_poset(S).join_table
    in_s = J[np.ix_(members, members)]
    mapped = np.where(in_e != ABSENT, members[np.where(in_e != ABSENT, in_e, 0)], ABSENT)
    agree = bool((mapped == in_s).all())
    cjs = order.conditional_join_failure(P) is None
    if cjs:
        errors.ensure(agree, "joins of idempotents agree in E and S")
    return {"join_source_identity": True, "e_joins_agree": agree}


@dataclasses.dataclass(frozen=True)
class SemigroupClassification:
    flags: t.Dict[str, bool]
    reports: t.Dict[str, AxiomReport]

    def as_dict(self) -> t.Dict[str, t.Any]:
        return {
            "flags": dict(self.flags),
            "axioms": {k: v.as_dict() for k, v in self.reports.items()},
        }


def _first(P: FinitePoset, failing: np.ndarray) -> t.Tuple[str, ...]:
    return P.ids(np.argwhere(failing)[0]) if failing.any() else ()


def _basic_consequences(S: FiniteInverseSemigroup, derived: DerivedOrder) -> None:
    P = derived.poset
    rels = relations.derived(P)
    R, L, H = rels.prec.rel, S.leq, rels.smile.rel
    mismatch = R != derived.bi_below.rel
    errors.ensure(not mismatch.any(), "rather below is bi-below", _first(P, mismatch))

    E = idempotent_poset(S)
    errors.ensure(axioms.classify(E).flags["basic_poset"], "idempotents form a basic poset")
    members = np.flatnonzero(S.idempotent_mask)
    errors.ensure(
        bool((relations.derived(E).prec.rel == R[np.ix_(members, members)]).all()),
        "rather below agrees in E and S",
    )

    M, src, tgt = S.mult, S.source, S.target
    b, c, d = np.ix_(*(np.arange(S.size),) * 3)
    for x in range(S.size):
        # [b, c, d]: x ≺ b, c ≺ d, b⁻¹b ⌣ dd⁻¹ and not xc ≺ bd
        failing = R[x, b] & R[c, d] & H[src[b], tgt[d]] & ~R[M[x, c], M[b, d]]
        if failing.any():
            witness = (P.elements[x],) + _first(P, failing)
            raise errors.ConsistencyError("products of rather below pairs", witness)

    a, b, c = np.ix_(*(np.arange(S.size),) * 3)
    invariance = R[a, b] & L[src[b], tgt[c]] & ~R[M[a, c], M[b, c]]
    errors.ensure(not invariance.any(), "invariance", _first(P, invariance))


@functools.lru_cache(maxsize=256)
def classify_semigroup(S: FiniteInverseSemigroup) -> SemigroupClassification:
    """Decide whether ``S`` is a basic semigroup and whether it is ≃-basic.

    On basic semigroups the agreement of ``≺`` and ``≺≺``, the basic order on ``E``, the
    product rule for rather below pairs and invariance are asserted.
    """
    derived = natural_order(S)
    P = derived.poset
    rels = relations.derived(P)
    BB = derived.bi_below.rel
    joins = P.join_table != ABSENT
    linked = order.through(order.through(BB, derived.simeq.rel), BB.T)

    reports = {
        "bi_below_round": axioms.report_violations(P, "bi_below_round", ~BB.any(axis=1)),
        "prec_distributivity": axioms.check_axiom(P, "prec_distributivity", rels),
        "conditional_join_semilattice": axioms.report_violations(
            P, "conditional_join_semilattice", P.bounded & ~joins
        ),
        "simeq_joins": axioms.report_violations(P, "simeq_joins", joins != linked),
    }
    holds = {k: v.holds for k, v in reports.items()}
    basic = holds["bi_below_round"] and holds["prec_distributivity"]
    basic = basic and holds["conditional_join_semilattice"]
    simeq_basic = holds["prec_distributivity"] and holds["simeq_joins"]
    errors.ensure(not simeq_basic or basic, "simeq basic semigroups are basic")
    if basic:
        _basic_consequences(S, derived)
    flags = {"basic_semigroup": basic, "simeq_basic": simeq_basic}
    logger.info(f"Classified {S!r}: {flags}.")
    return SemigroupClassification(flags=flags, reports=reports)


def edetermined_check(S: FiniteInverseSemigroup) -> AxiomReport:
    """Check ``a <= b`` and ``a⁻¹a ≺ b⁻¹b`` imply ``a ≺ b``.

    The implication is a theorem for distributive conditional ∨-semilattices, where a failure
    raises; elsewhere it is only reported.
    """
    P = natural_poset(S)
    R = relations.derived(P).prec.rel
    report = axioms.report_violations(
        P, "e_determined", S.leq & R[np.ix_(S.source, S.source)] & ~R
    )
    suite = distributivity_suite(S)
    if suite["conditional_join_semilattice"] and suite["flags"]["S_distributive"]:
        errors.ensure(report.holds, "rather below is determined by sources", report.witness or ())
    else:
        logger.warning(f"Source determination not asserted on {S!r}: hypothesis not met.")
    return report
