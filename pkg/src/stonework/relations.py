"""Derived relations of a finite poset: disjointness, rather below and the Hausdorff relation.

All relations are ``n x n`` read-only boolean matrices indexed like the poset carrier.
"""
import dataclasses
import enum
import functools
import logging
import typing as t

import numpy as np

from . import errors, order
from .order import ABSENT, BoolMatrix, FinitePoset


logger = logging.getLogger(__name__)


class RelationKind(str, enum.Enum):
    """Kinds of derived relations."""

    PERP = "perp"
    RATHER_BELOW = "rather_below"
    HAUSDORFF = "hausdorff"
    CUSTOM_AUXILIARY = "custom_auxiliary"
    COMPATIBLE = "compatible"
    BI_BELOW = "bi_below"
    SIMEQ = "simeq"


@dataclasses.dataclass(frozen=True, eq=False)
class RelationMatrix:
    """A relation on the carrier of ``base``."""

    base: FinitePoset
    kind: RelationKind
    rel: BoolMatrix

    def holds(self, a: str, b: str) -> bool:
        return bool(self.rel[self.base.index(a), self.base.index(b)])

    def pairs(self) -> t.List[t.Tuple[str, str]]:
        return [(self.base.elements[a], self.base.elements[b]) for a, b in np.argwhere(self.rel)]


def _int(matrix: np.ndarray) -> np.ndarray:
    return matrix.astype(np.int64)


def auxiliarity_failure(leq: BoolMatrix, rel: BoolMatrix) -> t.Optional[t.Tuple[int, ...]]:
    """First ``(a, b, c, d)`` with ``a<=b rel c<=d`` but not ``a rel d``.

    A pair of ``rel`` outside ``<=`` is returned as a 2-tuple.
    """
    outside = rel & ~leq
    if outside.any():
        a, b = np.argwhere(outside)[0]
        return int(a), int(b)
    closure = (_int(leq) @ _int(rel) @ _int(leq)) > 0
    missing = closure & ~rel
    if not missing.any():
        return None
    a, d = (int(i) for i in np.argwhere(missing)[0])
    for b in np.flatnonzero(leq[a]):
        for c in np.flatnonzero(rel[b] & leq[:, d]):
            return a, int(b), int(c), d
    raise errors.ConsistencyError("auxiliarity witness", (a, d))  # pragma: no cover


def perp(P: FinitePoset) -> RelationMatrix:
    """``a ⊥ b`` iff the only common lower bound of ``a`` and ``b`` is the minimum."""
    lower = P.leq.T[:, None, :] & P.leq.T[None, :, :]
    rel = order.frozen(lower.sum(axis=2) == 1)
    errors.ensure(bool((rel == rel.T).all()), "perp symmetric")
    errors.ensure(bool(rel[P.zero].all()), "zero perp everything")
    return RelationMatrix(base=P, kind=RelationKind.PERP, rel=rel)


def _rather_below_from_dominance(
    P: FinitePoset, disjoint: BoolMatrix, dominates: np.ndarray
) -> BoolMatrix:
    """Shared tail of both rather-below formulas.

    ``dominates[a', b, c]`` states that ``a'`` and ``b`` witness ``c`` for the pair. The result
    holds at ``(a, b)`` iff ``a <= b`` and every ``c >= b`` is witnessed by some ``a' ⊥ a``.
    """
    n = P.size
    witnessed = (_int(disjoint) @ _int(dominates.reshape(n, n * n))).reshape(n, n, n) > 0
    every_c = np.all(~P.leq[None, :, :] | witnessed, axis=2)
    return t.cast(BoolMatrix, P.leq & every_c)


def _rather_below_general(P: FinitePoset, disjoint: BoolMatrix) -> BoolMatrix:
    n = P.size
    upper = (P.leq[:, None, :] & P.leq[None, :, :]).reshape(n * n, n)
    escapes = _int(upper) @ _int(~P.leq).T
    dominates = upper.any(axis=1)[:, None] & (escapes == 0)
    return _rather_below_from_dominance(P, disjoint, dominates.reshape(n, n, n))


def _rather_below_with_joins(P: FinitePoset, disjoint: BoolMatrix) -> BoolMatrix:
    joins = P.join_table
    present = joins != ABSENT
    dominates = present[:, :, None] & P.leq.T[np.where(present, joins, 0)]
    return _rather_below_from_dominance(P, disjoint, dominates)


def rather_below(P: FinitePoset, disjoint: t.Optional[RelationMatrix] = None) -> RelationMatrix:
    """Compute the rather below relation.

    ``a ≺ b`` iff ``a <= b`` and for every ``c >= b`` there is ``a' ⊥ a`` such that ``a'`` and
    ``b`` have common upper bounds and all of them dominate ``c``. On conditional
    ∨-semilattices the join form ``c <= a'∨b`` is computed too and must agree.

    :raises stonework.errors.ConsistencyError: If the two forms disagree.
    """
    disjoint = disjoint or perp(P)
    rel = _rather_below_general(P, disjoint.rel)

    if order.conditional_join_failure(P) is None:
        simplified = _rather_below_with_joins(P, disjoint.rel)
        mismatch = np.argwhere(rel != simplified)
        errors.ensure(
            mismatch.size == 0,
            "rather below join form",
            P.ids(mismatch[0]) if mismatch.size else (),
        )

    failure = auxiliarity_failure(P.leq, rel)
    errors.ensure(failure is None, "rather below auxiliarity", P.ids(failure or ()))
    errors.ensure(bool(rel[P.zero, P.zero]), "zero rather below zero")
    logger.debug(f"Rather below relation has {int(rel.sum())} pairs.")
    return RelationMatrix(base=P, kind=RelationKind.RATHER_BELOW, rel=order.frozen(rel))


def custom_auxiliary(P: FinitePoset, pairs: t.Iterable[t.Tuple[str, str]]) -> RelationMatrix:
    """Wrap a user supplied auxiliary relation.

    :raises stonework.errors.PreconditionError: If the relation is not auxiliary to ``<=``.
    """
    rel = np.zeros((P.size, P.size), dtype=bool)
    for a, b in pairs:
        rel[P.index(a), P.index(b)] = True
    failure = auxiliarity_failure(P.leq, rel)
    if failure is not None:
        raise errors.PreconditionError(f"relation is not auxiliary at {P.ids(failure)}")
    return RelationMatrix(base=P, kind=RelationKind.CUSTOM_AUXILIARY, rel=order.frozen(rel))


def leq_relation(P: FinitePoset) -> RelationMatrix:
    return RelationMatrix(base=P, kind=RelationKind.CUSTOM_AUXILIARY, rel=P.leq)


def hausdorff_rel(P: FinitePoset, prec: RelationMatrix) -> RelationMatrix:
    """Compute the Hausdorff relation from an auxiliary relation.

    ``a ⌣ b`` iff for all ``a' ≺ a`` and ``b' ≺ b`` there is ``c ≺ a, b`` lying above every
    ``c' ≺ a', b'`` in the sense ``c' ≺ c``.

    :raises stonework.errors.ConsistencyError: If ``<= ⊆ ⌣`` fails, or if ``≺`` is ``<=`` and
        ``⌣`` differs from existence of meets.
    """
    n = P.size
    R = prec.rel
    common = (R.T[:, None, :] & R.T[None, :, :]).reshape(n * n, n)
    covers = (_int(common) @ _int(~R)) == 0
    candidates = (R.T[:, None, :] & R.T[None, :, :]).reshape(n * n, n)
    ok = (_int(covers) @ _int(candidates).T) > 0
    below_pairs = (R[:, None, :, None] & R[None, :, None, :]).reshape(n * n, n * n)
    rel = order.frozen(np.all(~below_pairs | ok, axis=0).reshape(n, n))

    missing = np.argwhere(P.leq & ~rel)
    errors.ensure(
        missing.size == 0, "leq within hausdorff", P.ids(missing[0]) if missing.size else ()
    )
    if (R == P.leq).all():
        mismatch = np.argwhere(rel != (P.meet_table != ABSENT))
        errors.ensure(
            mismatch.size == 0, "hausdorff iff meet", P.ids(mismatch[0]) if mismatch.size else ()
        )
    return RelationMatrix(base=P, kind=RelationKind.HAUSDORFF, rel=rel)


@dataclasses.dataclass(frozen=True, eq=False)
class Relations:
    """The derived relations of one poset."""

    poset: FinitePoset
    perp: RelationMatrix
    prec: RelationMatrix
    smile: RelationMatrix

    @property
    def leq(self) -> BoolMatrix:
        return self.poset.leq


@functools.lru_cache(maxsize=512)
def derived(P: FinitePoset) -> Relations:
    """Compute and cache ⊥, ≺ and ⌣ for ``P``."""
    disjoint = perp(P)
    prec = rather_below(P, disjoint)
    smile = hausdorff_rel(P, prec)
    return Relations(poset=P, perp=disjoint, prec=prec, smile=smile)


def with_auxiliary(P: FinitePoset, prec: RelationMatrix) -> Relations:
    """Bundle ⊥ with a supplied auxiliary relation and the Hausdorff relation it induces."""
    return Relations(poset=P, perp=perp(P), prec=prec, smile=hausdorff_rel(P, prec))


def relation_by_kind(P: FinitePoset, kind: str) -> RelationMatrix:
    """Look a relation up by its CLI name ``prec``, ``smile``, ``perp`` or ``leq``."""
    rels = derived(P)
    table = {"prec": rels.prec, "smile": rels.smile, "perp": rels.perp, "leq": leq_relation(P)}
    try:
        return table[kind]
    except KeyError:
        raise errors.InputError(f"unknown relation kind {kind!r}") from None
