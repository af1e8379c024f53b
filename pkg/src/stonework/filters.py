"""Filters and ultrafilters of finite posets.

A ``<``-filter is a ``>``-closed and ``<``-directed subset. Every nonempty ``≺``-filter of a
finite poset is principal, generated by an element ``w`` with ``w ≺ w``. This gives the fast
path of :func:`enumerate_prec_ultrafilters`. The subset oracle :func:`all_filters` cross-checks it.
"""
import dataclasses
import functools
import logging
import typing as t

import numpy as np

from . import axioms, config, errors, order, relations
from .order import ABSENT, BoolMatrix, FinitePoset


logger = logging.getLogger(__name__)

FilterRelation = t.Literal["leq", "prec"]

_ORACLE_CHUNK = 2048


@dataclasses.dataclass(frozen=True)
class FilterSet:
    """A subset of a poset carrier, stored as sorted member indices.

    :param base: The poset.
    :param rel: Relation the set is meant to be a filter for.
    :param members: Sorted member indices.
    """

    base: FinitePoset
    rel: FilterRelation
    members: t.Tuple[int, ...]

    @property
    def mask(self) -> BoolMatrix:
        mask = np.zeros(self.base.size, dtype=bool)
        mask[list(self.members)] = True
        return mask

    def ids(self) -> t.Tuple[str, ...]:
        return self.base.ids(self.members)

    def __contains__(self, element: object) -> bool:
        return isinstance(element, str) and self.base.index(element) in self.members

    def __len__(self) -> int:
        return len(self.members)

    @property
    def generator(self) -> t.Optional[int]:
        """The ``<=``-least member, if any."""
        mask = self.mask
        least = np.flatnonzero(mask & order.lower_bounds(self.base, mask))
        return int(least[0]) if least.size else None

    @property
    def label(self) -> str:
        generator = self.generator
        if generator is None:
            return "U_{" + ",".join(self.ids()) + "}"
        return f"U_{self.base.elements[generator]}"

    def __repr__(self) -> str:
        return f"FilterSet({self.rel}, {list(self.ids())})"


def relation_matrix(P: FinitePoset, rel: FilterRelation) -> BoolMatrix:
    if rel == "leq":
        return P.leq
    if rel == "prec":
        return relations.derived(P).prec.rel
    raise errors.InputError(f"filters are defined for 'leq' or 'prec', not {rel!r}")


def from_mask(P: FinitePoset, rel: FilterRelation, mask: np.ndarray) -> FilterSet:
    return FilterSet(base=P, rel=rel, members=tuple(int(i) for i in np.flatnonzero(mask)))


def from_ids(P: FinitePoset, rel: FilterRelation, subset: t.Iterable[str]) -> FilterSet:
    return FilterSet(base=P, rel=rel, members=tuple(sorted({P.index(e) for e in subset})))


def filter_failure(R: BoolMatrix, mask: np.ndarray) -> t.Optional[t.Tuple[str, int, int]]:
    """First violated clause as ``(clause, u, v)``, or ``None``."""
    escapes = mask[:, None] & R & ~mask[None, :]
    if escapes.any():
        u, v = np.argwhere(escapes)[0]
        return "closed", int(u), int(v)
    lower = R[mask]
    common = (lower[:, :, None] & lower[:, None, :]).any(axis=0)
    undirected = mask[:, None] & mask[None, :] & ~common
    if undirected.any():
        u, v = np.argwhere(undirected)[0]
        return "directed", int(u), int(v)
    return None


def is_filter(
    P: FinitePoset, rel: FilterRelation, subset: t.Iterable[str]
) -> t.Tuple[bool, t.Optional[t.Tuple[str, str]]]:
    """Check both filter clauses.

    The result is cross-checked against the initial segment characterization: a subset is a
    filter iff it is recovered from each of its initial segments.

    :return: The verdict and, on failure, the violating pair.
    :raises stonework.errors.ConsistencyError: If the two characterizations disagree.
    """
    U = from_ids(P, rel, subset)
    R = relation_matrix(P, rel)
    failure = filter_failure(R, U.mask)
    by_segments = all(
        upward_closure(P, initial_segment(U, P.elements[a]), rel) == U.ids() for a in U.members
    )
    errors.ensure(
        (failure is None) == by_segments, "filters are determined by initial segments", U.ids()
    )
    if failure is None:
        return True, None
    clause, u, v = failure
    logger.debug(f"{U!r} is not {clause} at {(P.elements[u], P.elements[v])}.")
    return False, (P.elements[u], P.elements[v])


def initial_segment(U: FilterSet, a: str) -> t.Tuple[str, ...]:
    """The members of ``U`` below ``a``.

    :raises stonework.errors.ElementNotInFilter: If ``a`` is not a member.
    """
    if a not in U:
        raise errors.ElementNotInFilter(f"{a!r} is not a member of {U!r}")
    R = relation_matrix(U.base, U.rel)
    segment = U.mask & R[:, U.base.index(a)]
    return U.base.ids(np.flatnonzero(segment))


def upward_closure(
    P: FinitePoset, subset: t.Iterable[str], rel: FilterRelation
) -> t.Tuple[str, ...]:
    """Every element above some member of ``subset``."""
    R = relation_matrix(P, rel)
    indices = [P.index(e) for e in subset]
    above = R[indices].any(axis=0) if indices else np.zeros(P.size, dtype=bool)
    return P.ids(np.flatnonzero(above))


def principal_filter(P: FinitePoset, w: str, rel: FilterRelation) -> FilterSet:
    """``{v : w rel v}``."""
    R = relation_matrix(P, rel)
    return from_mask(P, rel, R[P.index(w)])


def is_proper(U: FilterSet) -> bool:
    return U.base.zero not in U.members


def _subset_masks(n: int, start: int, stop: int) -> np.ndarray:
    codes = np.arange(start, stop, dtype=np.int64)
    return ((codes[:, None] >> np.arange(n)[None, :]) & 1).astype(bool)


def _filter_rows(R: BoolMatrix, masks: np.ndarray) -> np.ndarray:
    weights = masks.astype(np.float32)
    rel = R.astype(np.float32)
    closed = ~(((weights @ rel) > 0.5) & ~masks).any(axis=1)
    common = np.einsum("mw,wu,wv->muv", weights, rel, rel, optimize=True) > 0.5
    pairs = masks[:, :, None] & masks[:, None, :]
    directed = ~(pairs & ~common).any(axis=(1, 2))
    return closed & directed


def all_filters(
    P: FinitePoset, rel: FilterRelation, *, cap: t.Optional[int] = None
) -> t.List[FilterSet]:
    """Every ``rel``-filter, the empty one included, by testing all subsets.

    :param cap: Largest admissible carrier, defaults to the configured oracle cap.
    :raises stonework.errors.CarrierTooLarge: Above the cap.
    """
    limit = config.StoneworkConfig().oracle_cap if cap is None else cap
    if P.size > limit:
        raise errors.CarrierTooLarge(P.size, limit, "subset oracle")
    R = relation_matrix(P, rel)
    found = []
    for start in range(0, 1 << P.size, _ORACLE_CHUNK):
        masks = _subset_masks(P.size, start, min(start + _ORACLE_CHUNK, 1 << P.size))
        found.extend(from_mask(P, rel, m) for m in masks[_filter_rows(R, masks)])
    logger.debug(f"Subset oracle found {len(found)} {rel}-filters on {P!r}.")
    return sorted(found, key=lambda U: U.members)


def _maximal(candidates: t.Sequence[FilterSet]) -> t.List[FilterSet]:
    sets = [frozenset(U.members) for U in candidates]
    return [U for U, s in zip(candidates, sets) if not any(s < other for other in sets)]


def _nonempty_prec_filters(P: FinitePoset) -> t.List[FilterSet]:
    R = relations.derived(P).prec.rel
    generators = np.flatnonzero(np.diag(R))
    unique = {from_mask(P, "prec", R[w]) for w in generators}
    return sorted(unique, key=lambda U: U.members)


def _fast_ultrafilters(P: FinitePoset) -> t.List[FilterSet]:
    proper = [U for U in _nonempty_prec_filters(P) if is_proper(U)]
    return _maximal(proper)


def _oracle_ultrafilters(P: FinitePoset, cap: int) -> t.List[FilterSet]:
    proper = [U for U in all_filters(P, "prec", cap=cap) if U.members and is_proper(U)]
    return _maximal(proper)


@functools.lru_cache(maxsize=512)
def _ultrafilters(P: FinitePoset, oracle_cap: int) -> t.Tuple[FilterSet, ...]:
    fast = sorted(_fast_ultrafilters(P), key=lambda U: U.members)
    R = relations.derived(P).prec.rel
    for U in fast:
        errors.ensure(filter_failure(R, U.mask) is None, "ultrafilters are filters", U.ids())
        errors.ensure(is_proper(U), "ultrafilters are proper", U.ids())
    if P.size <= oracle_cap:
        oracle = sorted(_oracle_ultrafilters(P, oracle_cap), key=lambda U: U.members)
        errors.ensure(
            [U.members for U in oracle] == [U.members for U in fast],
            "principal ultrafilters match the subset oracle",
            tuple(U.label for U in oracle),
        )
    logger.info(f"Found {len(fast)} ultrafilters on {P!r}.")
    return tuple(fast)


def enumerate_prec_ultrafilters(
    P: FinitePoset, *, oracle_cap: t.Optional[int] = None
) -> t.List[FilterSet]:
    """All nonempty maximal proper ``≺``-filters, sorted by member indices.

    Carriers up to ``oracle_cap`` are cross-checked once against the subset oracle.
    """
    cap = config.StoneworkConfig().oracle_cap if oracle_cap is None else oracle_cap
    return list(_ultrafilters(P, cap))


def ultrafilter_characterizations(P: FinitePoset, U: FilterSet) -> t.Dict[str, bool]:
    """Evaluate maximality, the complementary property and primeness of ``U``.

    On ``≺``-distributive conditional ∨-semilattices the three agree and this is asserted.

    :raises stonework.errors.NotAProperFilter: If ``U`` is not a nonempty proper ``≺``-filter.
    :raises stonework.errors.ConsistencyError: If the three flags disagree under the hypothesis.
    """
    rels = relations.derived(P)
    mask = U.mask
    if not U.members or not is_proper(U) or filter_failure(rels.prec.rel, mask) is not None:
        raise errors.NotAProperFilter(f"{U!r} is not a nonempty proper ≺-filter")

    current = frozenset(U.members)
    maximal = not any(
        current < frozenset(V.members) for V in _nonempty_prec_filters(P) if is_proper(V)
    )

    R, H, D = rels.prec.rel, rels.smile.rel, rels.perp.rel
    separated = D[:, mask].any(axis=1)
    unhooked = ~H[:, mask].any(axis=1)
    complementary = not (R & ~mask[None, :] & ~separated[:, None] & ~unhooked[None, :]).any()

    joins = P.join_table
    joined_in = (joins != ABSENT) & mask[np.where(joins != ABSENT, joins, 0)]
    prime = not (joined_in & ~mask[:, None] & ~mask[None, :]).any()

    flags = {"maximal": maximal, "complementary": complementary, "prime": prime}
    hypothesis = (
        axioms.check_axiom(P, "prec_distributivity", rels).holds
        and order.conditional_join_failure(P) is None
    )
    if hypothesis:
        errors.ensure(
            len(set(flags.values())) == 1, "maximal iff complementary iff prime", U.ids()
        )
    else:
        logger.warning(f"Ultrafilter equivalence not asserted on {P!r}: hypothesis not met.")
    return flags
