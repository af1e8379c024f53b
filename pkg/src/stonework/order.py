"""Finite posets with a minimum, partial meets and joins."""
import dataclasses
import functools
import logging
import typing as t

import numpy as np
import numpy.typing as npt

from . import config, errors


logger = logging.getLogger(__name__)

BoolMatrix = npt.NDArray[np.bool_]
IndexMatrix = npt.NDArray[np.int64]

#: Marker for an absent partial meet/join in the index tables.
ABSENT = -1


def frozen(array: npt.ArrayLike, dtype: t.Any = bool) -> t.Any:
    """Return a read-only numpy copy of ``array``."""
    out = np.array(array, dtype=dtype)
    out.setflags(write=False)
    return out


def through(left: np.ndarray, right: np.ndarray) -> BoolMatrix:
    """Boolean matrix product."""
    return t.cast(BoolMatrix, (left.astype(np.float32) @ right.astype(np.float32)) > 0.5)


def least_members(sets: BoolMatrix, leq: BoolMatrix) -> IndexMatrix:
    """Index of the least member of every row set, ``ABSENT`` where there is none.

    :param sets: Boolean array of shape ``(..., n)``; each last-axis row is a subset.
    :param leq: The ``n x n`` order.
    :return: Integer array of shape ``(...)``.
    """
    n = leq.shape[0]
    flat = sets.reshape(-1, n)
    # u is least iff u is a member and no member v has not(u <= v)
    escapes = flat.astype(np.int64) @ (~leq).T.astype(np.int64)
    least = flat & (escapes == 0)
    found = least.any(axis=1)
    index = np.where(found, least.argmax(axis=1), ABSENT)
    return t.cast(IndexMatrix, index.reshape(sets.shape[:-1]))


@dataclasses.dataclass(frozen=True, eq=False)
class Order:
    """A finite partial order on opaque string ids, stored by index."""

    elements: t.Tuple[str, ...]
    leq: BoolMatrix

    @property
    def size(self) -> int:
        return len(self.elements)

    @functools.cached_property
    def _positions(self) -> t.Dict[str, int]:
        return {element: i for i, element in enumerate(self.elements)}

    def index(self, element: str) -> int:
        """Return the index of ``element``.

        :raises stonework.errors.UnknownElement: If the id is not in the carrier.
        """
        try:
            return self._positions[element]
        except KeyError:
            raise errors.UnknownElement(f"unknown element id: {element!r}") from None

    def ids(self, indices: t.Iterable[int]) -> t.Tuple[str, ...]:
        return tuple(self.elements[int(i)] for i in indices)

    @functools.cached_property
    def join_table(self) -> IndexMatrix:
        """``join_table[a, b]`` is the index of ``a∨b`` or ``ABSENT``."""
        upper = self.leq[:, None, :] & self.leq[None, :, :]
        return t.cast(IndexMatrix, frozen(least_members(upper, self.leq), dtype=np.int64))

    @functools.cached_property
    def meet_table(self) -> IndexMatrix:
        """``meet_table[a, b]`` is the index of ``a∧b`` or ``ABSENT``."""
        lower = self.leq.T[:, None, :] & self.leq.T[None, :, :]
        return t.cast(IndexMatrix, frozen(least_members(lower, self.leq.T), dtype=np.int64))

    @functools.cached_property
    def bounded(self) -> BoolMatrix:
        """``bounded[a, b]`` iff ``a`` and ``b`` have a common upper bound."""
        through = self.leq.astype(np.int64) @ self.leq.T.astype(np.int64)
        return t.cast(BoolMatrix, frozen(through > 0))

    @functools.cached_property
    def maximum(self) -> t.Optional[int]:
        tops = np.flatnonzero(self.leq.all(axis=0))
        return int(tops[0]) if tops.size else None


@dataclasses.dataclass(frozen=True, eq=False)
class FinitePoset(Order):
    """A finite poset with a distinguished minimum ``zero`` (an index)."""

    zero: int = 0

    @property
    def zero_id(self) -> str:
        return self.elements[self.zero]

    def as_dict(self) -> t.Dict[str, t.Any]:
        return {
            "kind": "poset",
            "elements": list(self.elements),
            "leq": [list(self.ids(pair)) for pair in np.argwhere(self.leq)],
            "zero": self.zero_id,
        }

    def __repr__(self) -> str:
        return f"FinitePoset(size={self.size}, zero={self.zero_id!r})"


@dataclasses.dataclass(frozen=True)
class PartialLatticeOps:
    """Partial meet and join maps of a poset, keyed by element ids."""

    meet: t.Dict[t.Tuple[str, str], str]
    join: t.Dict[t.Tuple[str, str], str]


def _check_carrier(elements: t.Sequence[str], cap: t.Optional[int]) -> None:
    if not elements:
        raise errors.SchemaError("<poset>", "elements", "carrier must not be empty")
    if len(set(elements)) != len(elements):
        duplicates = sorted({e for e in elements if list(elements).count(e) > 1})
        raise errors.SchemaError("<poset>", "elements", f"duplicate ids {duplicates}")
    limit = config.default_cap() if cap is None else cap
    if len(elements) > limit:
        raise errors.CarrierTooLarge(len(elements), limit)


def check_partial_order(elements: t.Sequence[str], leq: BoolMatrix) -> None:
    """Verify reflexivity, antisymmetry and transitivity of ``leq``.

    :raises stonework.errors.StructureError: With the lexicographically first violation.
    """
    diagonal = np.flatnonzero(~np.diag(leq))
    if diagonal.size:
        i = int(diagonal[0])
        raise errors.NotReflexive((elements[i], elements[i]))

    both = leq & leq.T & ~np.eye(len(elements), dtype=bool)
    if both.any():
        a, b = (int(i) for i in np.argwhere(both)[0])
        raise errors.NotAntisymmetric((elements[a], elements[b]))

    through = leq.astype(np.int64) @ leq.astype(np.int64)
    missing = (through > 0) & ~leq
    if missing.any():
        a, c = (int(i) for i in np.argwhere(missing)[0])
        b = int(np.flatnonzero(leq[a] & leq[:, c])[0])
        raise errors.NotTransitive((elements[a], elements[b], elements[c]))


def poset_from_matrix(
    elements: t.Sequence[str], leq: npt.ArrayLike, zero: str, *, cap: t.Optional[int] = None
) -> FinitePoset:
    """Build and validate a :class:`FinitePoset` from a boolean matrix.

    :raises stonework.errors.StructureError: When the matrix is not a partial order with
        minimum ``zero``.
    """
    _check_carrier(elements, cap)
    matrix = frozen(leq)
    if matrix.shape != (len(elements), len(elements)):
        raise errors.SchemaError("<poset>", "leq", f"expected a square matrix of {len(elements)}")
    check_partial_order(elements, matrix)
    try:
        z = list(elements).index(zero)
    except ValueError:
        raise errors.UnknownElement(f"unknown zero id: {zero!r}") from None
    above = np.flatnonzero(~matrix[z])
    if above.size:
        raise errors.NoMinimum((zero, elements[int(above[0])]))
    return FinitePoset(elements=tuple(elements), leq=matrix, zero=z)


def validate_poset(
    elements: t.Sequence[str],
    pairs: t.Iterable[t.Tuple[str, str]],
    zero: str,
    *,
    cap: t.Optional[int] = None,
) -> FinitePoset:
    """Validate a poset given as explicit order pairs.

    The pairs are not closed under reflexivity or transitivity; the input must already be a
    partial order.

    :param elements: Unique element ids.
    :param pairs: All pairs ``(a, b)`` with ``a <= b``.
    :param zero: Id of the minimum.
    :param cap: Carrier cap, defaults to the configured one.
    :raises stonework.errors.StructureError: On any order violation.
    """
    _check_carrier(elements, cap)
    positions = {element: i for i, element in enumerate(elements)}
    matrix = np.zeros((len(elements), len(elements)), dtype=bool)
    for a, b in pairs:
        if a not in positions or b not in positions:
            raise errors.UnknownElement(f"order pair ({a!r}, {b!r}) uses an unknown id")
        matrix[positions[a], positions[b]] = True
    poset = poset_from_matrix(elements, matrix, zero, cap=cap)
    logger.debug(f"Validated poset with {poset.size} elements.")
    return poset


def partial_meet(P: Order, a: str, b: str) -> t.Optional[str]:
    """Greatest lower bound of ``a`` and ``b`` or ``None`` if absent."""
    m = int(P.meet_table[P.index(a), P.index(b)])
    return None if m == ABSENT else P.elements[m]


def partial_join(P: Order, a: str, b: str) -> t.Optional[str]:
    """Least upper bound of ``a`` and ``b`` or ``None`` if absent."""
    j = int(P.join_table[P.index(a), P.index(b)])
    return None if j == ABSENT else P.elements[j]


def lattice_ops(P: Order) -> PartialLatticeOps:
    """Collect the partial meet and join maps keyed by element ids."""
    meet: t.Dict[t.Tuple[str, str], str] = {}
    join: t.Dict[t.Tuple[str, str], str] = {}
    for a, b in np.argwhere(P.meet_table != ABSENT):
        meet[(P.elements[a], P.elements[b])] = P.elements[P.meet_table[a, b]]
    for a, b in np.argwhere(P.join_table != ABSENT):
        join[(P.elements[a], P.elements[b])] = P.elements[P.join_table[a, b]]
    return PartialLatticeOps(meet=meet, join=join)


def conditional_join_failure(P: Order) -> t.Optional[t.Tuple[int, int]]:
    """First bounded pair without a join, by index, or ``None``."""
    missing = P.bounded & (P.join_table == ABSENT)
    if not missing.any():
        return None
    a, b = np.argwhere(missing)[0]
    return int(a), int(b)


def is_conditional_join_semilattice(P: Order) -> t.Tuple[bool, t.Optional[t.Tuple[str, str]]]:
    """Decide whether every bounded pair has a join.

    :return: The verdict and, on failure, a bounded pair without a join.
    """
    failure = conditional_join_failure(P)
    if failure is None:
        return True, None
    return False, (P.elements[failure[0]], P.elements[failure[1]])


def is_join_semilattice(P: Order) -> bool:
    return bool((P.join_table != ABSENT).all())


def up_set(P: Order, a: int) -> BoolMatrix:
    return t.cast(BoolMatrix, P.leq[a])


def down_set(P: Order, a: int) -> BoolMatrix:
    return t.cast(BoolMatrix, P.leq[:, a])


def upper_bounds(P: Order, subset: BoolMatrix) -> BoolMatrix:
    """Common upper bounds of a subset; every element bounds the empty set."""
    return t.cast(BoolMatrix, P.leq[subset].all(axis=0))


def lower_bounds(P: Order, subset: BoolMatrix) -> BoolMatrix:
    return t.cast(BoolMatrix, P.leq[:, subset].all(axis=1))


def join_of(P: Order, subset: BoolMatrix) -> t.Optional[int]:
    """Least upper bound of an arbitrary subset, ``None`` if absent.

    The empty subset has the minimum as its join when there is one.
    """
    least = int(least_members(upper_bounds(P, subset), P.leq))
    return None if least == ABSENT else least


def opposite(P: Order) -> Order:
    """The order-dual of ``P``; the minimum of ``P`` becomes a maximum."""
    return Order(elements=P.elements, leq=frozen(P.leq.T))


def join_meet_duality(P: Order) -> t.Optional[t.Tuple[str, str]]:
    """First pair whose join in ``P`` differs from its meet in the opposite order."""
    dual = opposite(P)
    mismatch = np.argwhere(P.join_table != dual.meet_table)
    if mismatch.size == 0:
        return None
    a, b = mismatch[0]
    return P.elements[a], P.elements[b]


def join_is_least_bound(P: Order) -> t.Optional[t.Tuple[str, str]]:
    """Exhaustive re-check that every present join is least among common upper bounds."""
    for a in range(P.size):
        for b in range(P.size):
            j = int(P.join_table[a, b])
            if j == ABSENT:
                continue
            bounds = np.flatnonzero(up_set(P, a) & up_set(P, b))
            if not P.leq[a, j] or not P.leq[b, j] or not all(P.leq[j, u] for u in bounds):
                return P.elements[a], P.elements[b]
    return None
