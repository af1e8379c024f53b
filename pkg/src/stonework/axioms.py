"""Axiom checks on finite posets, the classification flags and the implication ladder.

Every axiom is evaluated exhaustively as a boolean violation array whose axes are the quantified
variables in the order they are listed in :data:`AXIOM_VARIABLES`. The witness of a failing axiom
is the first violation in index order.
"""
import dataclasses
import functools
import logging
import typing as t

import numpy as np

from . import config, errors, order, relations
from .order import ABSENT, BoolMatrix, FinitePoset, through
from .relations import Relations


logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class AxiomReport:
    """Outcome of one axiom check.

    :param axiom: Axiom id.
    :param holds: Whether the formula holds on the whole carrier.
    :param witness: Element ids of the first violation, ``None`` when the axiom holds.
    """

    axiom: str
    holds: bool
    witness: t.Optional[t.Tuple[str, ...]] = None

    def as_dict(self) -> t.Dict[str, t.Any]:
        witness = list(self.witness) if self.witness is not None else None
        return {"axiom": self.axiom, "holds": self.holds, "witness": witness}


class _Terms:
    """Arrays shared by the axiom evaluations of one poset."""

    def __init__(self, rels: Relations) -> None:
        self.poset = rels.poset
        self.n = rels.poset.size
        self.L = rels.poset.leq
        self.R = rels.prec.rel
        self.H = rels.smile.rel
        self.D = rels.perp.rel
        self.has = rels.poset.join_table != ABSENT
        self.Jc = np.where(self.has, rels.poset.join_table, 0)

    @functools.cached_property
    def join_onehot(self) -> np.ndarray:
        """``[p, q, j]`` iff ``p∨q`` exists and is ``j``."""
        return self.has[:, :, None] & (self.Jc[:, :, None] == np.arange(self.n)[None, None, :])

    def joins_below(self, rel: BoolMatrix) -> np.ndarray:
        """``[b, c, j]`` iff ``j = b'∨c'`` for some ``b' rel b`` and ``c' rel c``."""
        weights = rel.astype(np.float32)
        counts = np.einsum(
            "pb,qc,pqj->bcj", weights, weights, self.join_onehot.astype(np.float32), optimize=True
        )
        return counts > 0.5

    @functools.cached_property
    def nonzero_prec(self) -> BoolMatrix:
        """``≺`` with the row of the minimum cleared."""
        rel = self.R.copy()
        rel[self.poset.zero] = False
        return t.cast(BoolMatrix, rel)


def _prec_distributivity(T: _Terms) -> np.ndarray:
    n, R = T.n, T.R
    below_joins = T.joins_below(R).reshape(n * n, n)
    viol = np.zeros((n, n, n), dtype=bool)
    for a in range(n):
        # [a', j]: a' ≺ j ≺ a
        between = R & R[:, a][None, :]
        reached = through(between, below_joins.T)
        rhs = np.all(~R[:, a][:, None] | reached, axis=0).reshape(n, n)
        lhs = T.L[a][T.Jc]
        viol[a] = T.has & (lhs != rhs)
    return viol


def _interpolation(T: _Terms) -> np.ndarray:
    return T.R & ~through(T.R, T.R)


def _approximation(T: _Terms) -> np.ndarray:
    return ~T.L & ~through(T.R.T, ~T.L)


def _lower_order(T: _Terms) -> np.ndarray:
    return ~T.L & ~through(T.R.T, ~T.R)


def _shrinking(T: _Terms) -> np.ndarray:
    n = T.n
    below_joins = T.joins_below(T.R).reshape(n * n, n)
    covered = through(below_joins, T.L.T).reshape(n, n, n).transpose(2, 0, 1)
    return T.has[None] & T.R[:, T.Jc] & ~covered


def _decomposition(T: _Terms, rel: BoolMatrix) -> np.ndarray:
    n, L = T.n, T.L
    viol = np.zeros((n, n, n), dtype=bool)
    for a in range(n):
        # [b, c, a']: a' rel a and (a' rel b or a' rel c)
        parts = rel[:, a][None, None, :] & (rel.T[:, None, :] | rel.T[None, :, :])
        unbounded = through(parts.reshape(n * n, n), ~L)
        joined_below = np.all(unbounded | L[a][None, :], axis=1).reshape(n, n)
        viol[a] = T.has & L[a][T.Jc] & ~joined_below
    return viol


def _prec_decomposition(T: _Terms) -> np.ndarray:
    return _decomposition(T, T.R)


def _leq_decomposition(T: _Terms) -> np.ndarray:
    return _decomposition(T, T.L)


def _leq_distributivity(T: _Terms) -> np.ndarray:
    split = T.joins_below(T.L).transpose(2, 0, 1)
    return T.has[None] & (T.L[:, T.Jc] != split)


def _perp_decomposition(T: _Terms) -> np.ndarray:
    return T.has[None] & T.D[:, :, None] & T.L[:, T.Jc] & ~T.L[:, None, :]


def _perp_distributivity(T: _Terms) -> np.ndarray:
    return _perp_distributivity_of(T, T.R)


def _perp_distributivity_of(T: _Terms, rel: BoolMatrix) -> np.ndarray:
    return T.has[None] & T.D[:, :, None] & rel[:, T.Jc] & ~rel[:, None, :]


def _vee_preservation(T: _Terms) -> np.ndarray:
    return T.has[None] & T.D[:, :, None] & T.D[:, None, :] & ~T.D[:, T.Jc]


def _locally_hausdorff(T: _Terms) -> np.ndarray:
    return T.L[:, None, :] & T.L[None, :, :] & ~T.H[:, :, None]


def _u_auxiliarity(T: _Terms) -> np.ndarray:
    L, H = T.L, T.H
    return (
        L[:, :, None, None] & H[None, :, :, None] & L.T[None, None, :, :] & ~H[:, None, None, :]
    )


def _u_interpolation(T: _Terms) -> np.ndarray:
    n, R = T.n, T.R
    both = (R[:, :, None] & R[:, None, :]).reshape(n, n * n)
    reachable = through(R, both).reshape(n, n, n).transpose(1, 2, 0)
    return T.H[:, :, None] & R.T[:, None, :] & R.T[None, :, :] & ~reachable


def _complements(T: _Terms) -> np.ndarray:
    n, R = T.n, T.R
    # [a, b, v]: some a' ⊥ a has a'∨b = v
    complemented = through(T.D, T.join_onehot.reshape(n, n * n)).reshape(n, n, n)
    squeezed = (R[:, :, None] & R[None, :, :]).transpose(0, 2, 1).reshape(n * n, n)
    ok = through(complemented.reshape(n * n, n), squeezed.T).reshape(n, n, n, n)
    return R[:, :, None, None] & T.L[None, :, :, None] & R[None, None, :, :] & ~ok


def _predomain(T: _Terms) -> np.ndarray:
    R = T.R
    return R[:, None, :] & R[None, :, :] & ~(T.has[:, :, None] & R[T.Jc])


def _succ_round(T: _Terms) -> np.ndarray:
    return ~T.R.any(axis=1)


def _hausdorff_joins(T: _Terms) -> np.ndarray:
    return T.has != through(through(T.R, T.H), T.R.T)


def _one_witness(T: _Terms) -> np.ndarray:
    n = T.n
    # [a', b, c]: c <= a'∨b
    dominated = T.has[:, :, None] & T.L.T[T.Jc]
    witnessed = through(T.D, dominated.reshape(n, n * n)).reshape(n, n, n)
    return T.R != np.any(T.R[:, None, :] & witnessed, axis=2)


def _perp_equivalent(T: _Terms) -> np.ndarray:
    return T.D == through(T.nonzero_prec.T, T.nonzero_prec)


def _auxiliarity(T: _Terms) -> np.ndarray:
    L, R = T.L, T.R
    return L[:, :, None, None] & R[None, :, :, None] & L[None, None, :, :] & ~R[:, None, None, :]


def _prec_round_nonzero(T: _Terms) -> np.ndarray:
    viol = ~T.nonzero_prec.any(axis=0)
    viol[T.poset.zero] = False
    return viol


def _wedge_joins(T: _Terms) -> np.ndarray:
    return (T.poset.meet_table != ABSENT) & ~T.has


#: Registry of axiom ids in evaluation order.
AXIOMS: t.Dict[str, t.Callable[[_Terms], np.ndarray]] = {
    "prec_distributivity": _prec_distributivity,
    "interpolation": _interpolation,
    "approximation": _approximation,
    "lower_order": _lower_order,
    "shrinking": _shrinking,
    "prec_decomposition": _prec_decomposition,
    "leq_decomposition": _leq_decomposition,
    "leq_distributivity": _leq_distributivity,
    "perp_decomposition": _perp_decomposition,
    "perp_distributivity": _perp_distributivity,
    "vee_preservation": _vee_preservation,
    "locally_hausdorff": _locally_hausdorff,
    "u_auxiliarity": _u_auxiliarity,
    "u_interpolation": _u_interpolation,
    "complements": _complements,
    "predomain": _predomain,
    "succ_round": _succ_round,
    "hausdorff_joins": _hausdorff_joins,
    "one_witness": _one_witness,
    "perp_equivalent": _perp_equivalent,
    "auxiliarity": _auxiliarity,
    "prec_round_nonzero": _prec_round_nonzero,
    "wedge_joins": _wedge_joins,
}

#: Names of the quantified variables of every axiom, in witness order.
AXIOM_VARIABLES: t.Dict[str, t.Tuple[str, ...]] = {
    "prec_distributivity": ("a", "b", "c"),
    "interpolation": ("a", "b"),
    "approximation": ("a", "b"),
    "lower_order": ("a", "b"),
    "shrinking": ("a", "b", "c"),
    "prec_decomposition": ("a", "b", "c"),
    "leq_decomposition": ("a", "b", "c"),
    "leq_distributivity": ("a", "b", "c"),
    "perp_decomposition": ("a", "b", "c"),
    "perp_distributivity": ("a", "b", "c"),
    "vee_preservation": ("a", "b", "c"),
    "locally_hausdorff": ("a", "b", "c"),
    "u_auxiliarity": ("a", "a'", "b'", "b"),
    "u_interpolation": ("a", "b", "c"),
    "complements": ("a", "b", "c", "d"),
    "predomain": ("a", "b", "c"),
    "succ_round": ("a",),
    "hausdorff_joins": ("a", "b"),
    "one_witness": ("a", "b"),
    "perp_equivalent": ("a", "b"),
    "auxiliarity": ("a", "b", "c", "d"),
    "prec_round_nonzero": ("a",),
    "wedge_joins": ("a", "b"),
}


def report_violations(P: order.Order, axiom_id: str, viol: np.ndarray) -> AxiomReport:
    """Report the first violation in index order, reading its axes as element indices."""
    if not viol.any():
        return AxiomReport(axiom=axiom_id, holds=True)
    first = np.unravel_index(int(np.argmax(viol)), viol.shape)
    return AxiomReport(axiom=axiom_id, holds=False, witness=P.ids(first))


def _evaluate(terms: _Terms, axiom_id: str) -> AxiomReport:
    try:
        check = AXIOMS[axiom_id]
    except KeyError:
        raise errors.UnknownAxiom(f"unknown axiom id: {axiom_id!r}") from None
    report = report_violations(terms.poset, axiom_id, check(terms))
    logger.debug(f"Axiom {axiom_id}: holds={report.holds} witness={report.witness}.")
    return report


def check_axiom(
    P: FinitePoset, axiom_id: str, rels: t.Optional[Relations] = None
) -> AxiomReport:
    """Evaluate one axiom exhaustively.

    :param P: The poset.
    :param axiom_id: One of :data:`AXIOMS`.
    :param rels: Relations to evaluate against, defaults to the derived ones.
    :raises stonework.errors.UnknownAxiom: If the id is not registered.
    """
    return _evaluate(_Terms(rels or relations.derived(P)), axiom_id)


def check_all(P: FinitePoset, rels: t.Optional[Relations] = None) -> t.Dict[str, AxiomReport]:
    """Evaluate every registered axiom in registry order."""
    terms = _Terms(rels or relations.derived(P))
    return {axiom_id: _evaluate(terms, axiom_id) for axiom_id in AXIOMS}


#: Implications that hold for every auxiliary relation on every finite poset.
LADDER: t.Tuple[t.Tuple[t.Tuple[str, ...], str], ...] = (
    (("prec_distributivity",), "prec_decomposition"),
    (("prec_decomposition",), "leq_decomposition"),
    (("prec_distributivity",), "perp_distributivity"),
    (("leq_decomposition",), "perp_decomposition"),
    (("perp_decomposition",), "vee_preservation"),
    (("prec_distributivity",), "interpolation"),
    (("prec_distributivity",), "shrinking"),
    (("prec_distributivity",), "approximation"),
    (("approximation",), "lower_order"),
    (("approximation",), "prec_round_nonzero"),
    (("approximation",), "perp_equivalent"),
    (("interpolation",), "u_interpolation"),
    (("interpolation", "locally_hausdorff"), "u_auxiliarity"),
    (("interpolation", "lower_order", "shrinking", "leq_distributivity"), "prec_distributivity"),
)


def ladder_label(premises: t.Sequence[str], conclusion: str) -> str:
    return f"{' & '.join(premises)} => {conclusion}"


def implication_ladder(
    P: FinitePoset,
    rels: t.Optional[Relations] = None,
    reports: t.Optional[t.Mapping[str, AxiomReport]] = None,
) -> t.List[str]:
    """Check the general implications between the axioms.

    :return: Labels of the violated implications; empty on every poset.
    """
    reports = reports or check_all(P, rels)
    violated = []
    for premises, conclusion in LADDER:
        if all(reports[p].holds for p in premises) and not reports[conclusion].holds:
            label = ladder_label(premises, conclusion)
            logger.warning(f"Implication {label} fails on {P!r}.")
            violated.append(label)
    return violated


def is_locally_boolean(P: FinitePoset) -> bool:
    """Decide directly whether every principal down-set is a Boolean algebra.

    A finite down-set is Boolean iff it has ``2**k`` members for its ``k`` atoms and
    ``y <= z`` coincides with inclusion of the atoms below.
    """
    down_sizes = P.leq.sum(axis=0)
    atoms = down_sizes == 2
    atoms_below = P.leq & atoms[:, None]
    for x in range(P.size):
        members = np.flatnonzero(order.down_set(P, x))
        k = int(atoms_below[:, x].sum())
        if members.size != 1 << k:
            return False
        sub = atoms_below[:, members].T
        inclusion = ~through(sub, ~sub.T)
        if not (inclusion == P.leq[np.ix_(members, members)]).all():
            return False
    return True


@dataclasses.dataclass(frozen=True)
class Classification:
    """Classification flags of a poset with the axiom reports they were derived from."""

    flags: t.Dict[str, bool]
    reports: t.Dict[str, AxiomReport]

    def as_dict(self) -> t.Dict[str, t.Any]:
        return {
            "flags": dict(self.flags),
            "axioms": {k: v.as_dict() for k, v in self.reports.items()},
        }


_BASIC_CONSEQUENCES = ("predomain", "complements", "locally_hausdorff", "one_witness")


@functools.lru_cache(maxsize=512)
def classify(P: FinitePoset) -> Classification:
    """Classify ``P`` as basic, ⌣-basic, local Boolean, generalized Boolean or Boolean.

    Known consequences of each class are asserted on the way.

    :raises stonework.errors.ConsistencyError: If an asserted consequence fails.
    """
    rels = relations.derived(P)
    reports = check_all(P, rels)
    holds = {k: v.holds for k, v in reports.items()}
    cjs = order.conditional_join_failure(P) is None
    leq_equals_prec = bool((rels.prec.rel == P.leq).all())
    has_maximum = P.maximum is not None

    basic = holds["succ_round"] and holds["prec_distributivity"] and cjs
    smile_basic = holds["prec_distributivity"] and holds["hausdorff_joins"]
    local_boolean = basic and leq_equals_prec
    flags = {
        "basic_poset": basic,
        "smile_basic": smile_basic,
        "local_boolean": local_boolean,
        "generalized_boolean": smile_basic and leq_equals_prec and bool(rels.smile.rel.all()),
        "boolean": local_boolean and has_maximum,
        "conditional_join_semilattice": cjs,
        "leq_equals_prec": leq_equals_prec,
        "has_maximum": has_maximum,
        "wedge_joins": holds["wedge_joins"],
    }

    violated = implication_ladder(P, rels, reports)
    errors.ensure(not violated, "implication ladder", tuple(violated))
    errors.ensure(not smile_basic or basic, "smile basic posets are basic")
    if basic:
        for axiom_id in _BASIC_CONSEQUENCES:
            errors.ensure(
                holds[axiom_id],
                f"basic posets satisfy {axiom_id}",
                reports[axiom_id].witness or (),
            )
        errors.ensure(leq_equals_prec, "finite basic posets have prec equal to leq")
    errors.ensure(
        local_boolean == is_locally_boolean(P), "local Boolean iff every down-set is Boolean"
    )
    if local_boolean:
        errors.ensure(
            smile_basic == holds["wedge_joins"], "local Boolean: smile basic iff wedge joins"
        )
    errors.ensure(
        flags["generalized_boolean"] == flags["boolean"],
        "finite generalized Boolean algebras are Boolean",
    )
    logger.info(f"Classified {P!r}: {[k for k, v in flags.items() if v]}.")
    return Classification(flags=flags, reports=reports)


def auxiliary_relations(P: FinitePoset) -> t.Iterator[BoolMatrix]:
    """Yield every auxiliary relation contained in ``<=``.

    These are the down-sets of the pairs of ``<=`` under ``(a, d) ⊑ (b, c)`` iff ``a <= b`` and
    ``c <= d``.
    """
    L = P.leq
    pairs = np.argwhere(L)
    firsts, seconds = pairs[:, 0], pairs[:, 1]
    # forces[p, q]: a relation containing pair p contains pair q
    forces = L[np.ix_(firsts, firsts)].T & L[np.ix_(seconds, seconds)]

    def extend(status: np.ndarray) -> t.Iterator[BoolMatrix]:
        unknown = np.flatnonzero(status < 0)
        if unknown.size == 0:
            rel = np.zeros_like(L)
            chosen = status == 1
            rel[firsts[chosen], seconds[chosen]] = True
            yield rel
            return
        p = unknown[0]
        included = status.copy()
        included[forces[p]] = 1
        yield from extend(included)
        excluded = status.copy()
        excluded[forces[:, p]] = 0
        yield from extend(excluded)

    yield from extend(np.full(len(pairs), -1, dtype=np.int8))


def prec_is_minimal_auxiliary(P: FinitePoset, *, cap: t.Optional[int] = None) -> AxiomReport:
    """Check that rather below is the least ≻-round ⊥-distributive auxiliary relation.

    The containment is checked on every conditional ∨-semilattice. On ∨-semilattices with
    ⊥-decomposition, equality with the intersection of all such relations is checked too.

    :param cap: Largest admissible carrier, defaults to the configured minimality cap.
    :raises stonework.errors.CarrierTooLarge: Above the cap.
    :raises stonework.errors.PreconditionError: If ``P`` is not a conditional ∨-semilattice.
    """
    limit = config.StoneworkConfig().minimality_cap if cap is None else cap
    if P.size > limit:
        raise errors.CarrierTooLarge(P.size, limit, "minimality enumeration")
    if order.conditional_join_failure(P) is not None:
        raise errors.PreconditionError("minimality check needs a conditional ∨-semilattice")

    rels = relations.derived(P)
    terms = _Terms(rels)
    prec = rels.prec.rel
    intersection = P.leq.copy()
    candidates = 0
    for rel in auxiliary_relations(P):
        if not rel.any(axis=1).all() or _perp_distributivity_of(terms, rel).any():
            continue
        candidates += 1
        intersection &= rel
        escaped = prec & ~rel
        if escaped.any():
            a, b = np.argwhere(escaped)[0]
            return AxiomReport(axiom="prec_minimal", holds=False, witness=P.ids((a, b)))
    logger.debug(f"Rather below is contained in all {candidates} admissible relations.")

    if order.is_join_semilattice(P) and not _perp_decomposition(terms).any() and candidates:
        mismatch = prec != intersection
        if mismatch.any():
            a, b = np.argwhere(mismatch)[0]
            return AxiomReport(axiom="prec_minimal", holds=False, witness=P.ids((a, b)))
    return AxiomReport(axiom="prec_minimal", holds=True)
