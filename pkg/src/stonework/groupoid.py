"""Finite discrete groupoids, Lenz filter products and the ultrafilter groupoid of a semigroup.

Filters of a semigroup are taken on its natural order. For a set ``X`` of elements, ``X^<=`` is its
upward closure and products of sets are elementwise.
"""
import dataclasses
import functools
import itertools
import logging
import typing as t

import numpy as np

from . import config, errors, filters, isg, morphisms, order, relations, topology
from .axioms import AxiomReport
from .filters import FilterSet
from .isg import FiniteInverseSemigroup
from .order import ABSENT, BoolMatrix, IndexMatrix


logger = logging.getLogger(__name__)

ArrowSet = t.FrozenSet[int]
Seen = t.Set[int]

#: Largest groupoid the isomorphism search accepts.
ISOMORPHISM_CAP = 16


@dataclasses.dataclass(frozen=True, eq=False)
class FiniteGroupoid:
    """Arrows with a partial product table, inverses and units, all stored by index."""

    arrows: t.Tuple[str, ...]
    product: IndexMatrix
    inv: IndexMatrix
    units: BoolMatrix

    @property
    def size(self) -> int:
        return len(self.arrows)

    @functools.cached_property
    def _positions(self) -> t.Dict[str, int]:
        return {g: i for i, g in enumerate(self.arrows)}

    def index(self, arrow: str) -> int:
        try:
            return self._positions[arrow]
        except KeyError:
            raise errors.UnknownElement(f"unknown arrow id: {arrow!r}") from None

    def ids(self, indices: t.Iterable[int]) -> t.Tuple[str, ...]:
        return tuple(self.arrows[int(i)] for i in indices)

    def label(self, members: t.Iterable[int]) -> str:
        return "{" + ",".join(self.ids(sorted(members))) + "}"

    @functools.cached_property
    def source(self) -> IndexMatrix:
        """``source[g]`` is ``g⁻¹g``."""
        return t.cast(IndexMatrix, order.frozen(self.product[self.inv, np.arange(self.size)], int))

    @functools.cached_property
    def target(self) -> IndexMatrix:
        """``target[g]`` is ``gg⁻¹``."""
        return t.cast(IndexMatrix, order.frozen(self.product[np.arange(self.size), self.inv], int))

    def as_dict(self) -> t.Dict[str, t.Any]:
        defined = np.argwhere(self.product != ABSENT)
        return {
            "kind": "groupoid",
            "arrows": list(self.arrows),
            "product": [list(self.ids((g, h, self.product[g, h]))) for g, h in defined],
            "inv": list(self.ids(self.inv)),
            "units": list(self.ids(np.flatnonzero(self.units))),
        }

    def __repr__(self) -> str:
        return f"FiniteGroupoid(arrows={self.size}, units={int(self.units.sum())})"


def _groupoid_failure(
    product: IndexMatrix, inv: IndexMatrix, units: BoolMatrix
) -> t.Optional[t.Tuple[str, t.Tuple[int, ...]]]:
    n = product.shape[0]
    everything = np.arange(n)
    if (inv[inv] != everything).any():
        return "inverse is an involution", (int(np.flatnonzero(inv[inv] != everything)[0]),)
    source = product[inv, everything]
    target = product[everything, inv]
    for name, ends in (("source", source), ("target", target)):
        missing = (ends == ABSENT) | ~units[np.where(ends == ABSENT, 0, ends)]
        if missing.any():
            return f"{name} is a unit", (int(np.flatnonzero(missing)[0]),)
    idempotent = (np.diag(product) == everything) & (inv == everything)
    if (idempotent != units).any():
        first = int(np.flatnonzero(idempotent != units)[0])
        return "units are the self-inverse idempotents", (first,)
    composable = source[:, None] == target[None, :]
    if (composable != (product != ABSENT)).any():
        g, h = np.argwhere(composable != (product != ABSENT))[0]
        return "defined iff source meets target", (int(g), int(h))
    moved = product[target, everything] != everything
    moved |= product[everything, source] != everything
    if moved.any():
        return "units act as identities", (int(np.flatnonzero(moved)[0]),)
    for g, h in np.argwhere(composable):
        gh = product[g, h]
        for k in np.flatnonzero(composable[h]):
            if product[gh, k] != product[g, product[h, k]]:
                return "associativity", (int(g), int(h), int(k))
    return None


def validate_groupoid(
    arrows: t.Sequence[str],
    product: t.Iterable[t.Sequence[str]],
    inv: t.Sequence[str],
    units: t.Iterable[str],
    *,
    cap: t.Optional[int] = None,
) -> FiniteGroupoid:
    """Validate a groupoid given by its defined products ``[g, h, gh]``.

    :raises stonework.errors.NotAGroupoid: With the failing law and the arrows at fault.
    """
    limit = config.StoneworkConfig().cap if cap is None else cap
    if len(arrows) > limit:
        raise errors.CarrierTooLarge(len(arrows), limit, "groupoid")
    if len(set(arrows)) != len(arrows):
        raise errors.SchemaError("<groupoid>", "arrows", "arrow ids must be unique")
    positions = {g: i for i, g in enumerate(arrows)}
    n = len(arrows)
    if len(inv) != n:
        raise errors.SchemaError("<groupoid>", "inv", f"expected {n} entries")
    table = np.full((n, n), ABSENT, dtype=np.int64)
    try:
        for entry in product:
            if len(entry) != 3:
                raise errors.SchemaError("<groupoid>", "product", "entries are [g, h, gh]")
            g, h, gh = (positions[x] for x in entry)
            if table[g, h] not in (ABSENT, gh):
                raise errors.SchemaError("<groupoid>", "product", f"{entry[:2]} defined twice")
            table[g, h] = gh
        inverses = np.array([positions[x] for x in inv], dtype=np.int64)
        unit_mask = np.zeros(n, dtype=bool)
        unit_mask[[positions[u] for u in units]] = True
    except KeyError as exc:
        raise errors.UnknownElement(f"unknown arrow id: {exc.args[0]!r}") from None

    failure = _groupoid_failure(table, inverses, unit_mask)
    if failure is not None:
        law, witness = failure
        ids = tuple(arrows[i] for i in witness)
        raise errors.NotAGroupoid(ids, f"groupoid law '{law}' fails at {ids}")
    G = FiniteGroupoid(
        arrows=tuple(arrows),
        product=order.frozen(table, np.int64),
        inv=order.frozen(inverses, np.int64),
        units=order.frozen(unit_mask),
    )
    logger.debug(f"Validated {G!r}.")
    return G


def pair_groupoid(points: t.Sequence[str]) -> FiniteGroupoid:
    """Arrows ``(x,y)`` with ``(x,y)(y,z) = (x,z)``."""
    arrow = "({},{})".format
    arrows = [arrow(x, y) for x, y in itertools.product(points, repeat=2)]
    product = [
        (arrow(x, y), arrow(y, z), arrow(x, z)) for x, y, z in itertools.product(points, repeat=3)
    ]
    inv = [arrow(y, x) for x, y in itertools.product(points, repeat=2)]
    return validate_groupoid(arrows, product, inv, [arrow(x, x) for x in points])


def group_groupoid(elements: t.Sequence[str], table: t.Sequence[t.Sequence[str]]) -> FiniteGroupoid:
    """A group as a one-unit groupoid; ``table[i][j]`` is ``elements[i]·elements[j]``."""
    identity = [e for i, e in enumerate(elements) if list(table[i]) == list(elements)]
    if len(identity) != 1:
        raise errors.NotAGroupoid(tuple(elements), "group table has no identity")
    e = identity[0]
    inv = []
    for i, g in enumerate(elements):
        candidates = [h for j, h in enumerate(elements) if table[i][j] == e]
        if len(candidates) != 1:
            raise errors.NotAGroupoid((g,), f"{g!r} has no unique inverse")
        inv.append(candidates[0])
    pairs = itertools.product(enumerate(elements), repeat=2)
    product = [(g, h, table[i][j]) for (i, g), (j, h) in pairs]
    return validate_groupoid(elements, product, inv, [e])


def unit_groupoid() -> FiniteGroupoid:
    return validate_groupoid(["u"], [("u", "u", "u")], ["u"], ["u"])


def is_bisection(G: FiniteGroupoid, B: t.Iterable[int]) -> bool:
    """Source and target are injective on ``B``."""
    members = list(B)
    return len(set(G.source[members].tolist())) == len(members) == len(
        set(G.target[members].tolist())
    )


def bisections(G: FiniteGroupoid) -> t.Tuple[ArrowSet, ...]:
    """Every bisection, the empty one included, ordered by size then members."""
    found: t.List[ArrowSet] = []

    def extend(start: int, chosen: t.Tuple[int, ...], sources: Seen, targets: Seen) -> None:
        found.append(frozenset(chosen))
        for g in range(start, G.size):
            if G.source[g] not in sources and G.target[g] not in targets:
                extend(
                    g + 1,
                    chosen + (g,),
                    sources | {int(G.source[g])},
                    targets | {int(G.target[g])},
                )

    extend(0, (), set(), set())
    return tuple(sorted(found, key=lambda B: (len(B), sorted(B))))


def set_product(G: FiniteGroupoid, O: ArrowSet, N: ArrowSet) -> ArrowSet:
    return frozenset(
        int(G.product[g, h]) for g in O for h in N if G.product[g, h] != ABSENT
    )


def set_inverse(G: FiniteGroupoid, O: ArrowSet) -> ArrowSet:
    return frozenset(int(G.inv[g]) for g in O)


def etale_basis_report(
    G: FiniteGroupoid, basis: t.Sequence[ArrowSet]
) -> t.Dict[str, AxiomReport]:
    """Evaluate the étale basis clauses on the discrete topology of ``G``.

    ``discrete`` states that the basis generates the discrete topology. ``inverse``,
    ``product`` and ``units`` are the three clauses of an étale basis. ``union`` is the
    ∪-étale clause ``O∪N ∈ S ⇔ O∪N ⊆ B`` for a compact bi-Hausdorff bisection ``B``.

    :raises stonework.errors.NotABasis: If the family does not cover the arrows.
    """
    X = topology.space(G.arrows, [G.ids(B) for B in basis])
    family = set(X.basis)
    units = frozenset(np.flatnonzero(G.units).tolist())

    def report(clause: str, failures: t.Iterator[t.Tuple[ArrowSet, ...]]) -> AxiomReport:
        first = next(failures, None)
        if first is None:
            return AxiomReport(axiom=clause, holds=True)
        return AxiomReport(axiom=clause, holds=False, witness=tuple(G.label(B) for B in first))

    def bi_hausdorff_bisection(B: ArrowSet) -> bool:
        return (
            topology.is_compact(X, B)
            and is_bisection(G, B)
            and topology.is_hausdorff_subset(X, set_product(G, set_inverse(G, B), B))
            and topology.is_hausdorff_subset(X, set_product(G, B, set_inverse(G, B)))
        )

    pairs = list(itertools.product(X.basis, repeat=2))
    reports = {
        "discrete": AxiomReport(axiom="discrete", holds=topology.is_discrete(X)),
        "inverse": report("inverse", ((O,) for O in X.basis if set_inverse(G, O) not in family)),
        "product": report(
            "product", ((O, N) for O, N in pairs if set_product(G, O, N) not in family)
        ),
        "units": report(
            "units",
            ((O,) for O in X.basis if not set_product(G, set_inverse(G, O), O) <= units),
        ),
        "union": report(
            "union",
            ((O, N) for O, N in pairs if ((O | N) in family) != bi_hausdorff_bisection(O | N)),
        ),
    }
    logger.debug(f"Étale basis clauses on {G!r}: { {k: v.holds for k, v in reports.items()} }.")
    return reports


def _members(mask: np.ndarray) -> np.ndarray:
    return np.flatnonzero(mask)


def products(S: FiniteInverseSemigroup, left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """Mask of ``{ab : a in left, b in right}``."""
    out = np.zeros(S.size, dtype=bool)
    out[S.mult[np.ix_(_members(left), _members(right))].ravel()] = True
    return out


def inverses(S: FiniteInverseSemigroup, mask: np.ndarray) -> np.ndarray:
    out = np.zeros(S.size, dtype=bool)
    out[S.inv[mask]] = True
    return out


def up(S: FiniteInverseSemigroup, mask: np.ndarray) -> np.ndarray:
    return t.cast(np.ndarray, S.leq[mask].any(axis=0))


def _singleton(S: FiniteInverseSemigroup, a: int) -> np.ndarray:
    mask = np.zeros(S.size, dtype=bool)
    mask[a] = True
    return mask


def source_filter(S: FiniteInverseSemigroup, mask: np.ndarray) -> np.ndarray:
    """``(U⁻¹U)^<=``."""
    return up(S, products(S, inverses(S, mask), mask))


def target_filter(S: FiniteInverseSemigroup, mask: np.ndarray) -> np.ndarray:
    """``(UU⁻¹)^<=``."""
    return up(S, products(S, mask, inverses(S, mask)))


def _same(left: np.ndarray, right: np.ndarray) -> bool:
    return bool((left == right).all())


def _check_leq_filter(S: FiniteInverseSemigroup, U: FilterSet) -> np.ndarray:
    mask = U.mask
    if U.base is not isg.natural_poset(S):
        raise errors.NotAFilter(f"{U!r} is not a subset of {S!r}")
    if not mask.any() or filters.filter_failure(S.leq, mask) is not None:
        raise errors.NotAFilter(f"{U!r} is not a nonempty ≤-filter")
    return mask


@dataclasses.dataclass(frozen=True)
class FilterProductResult:
    """A Lenz product with the three definedness clauses.

    :param defined_in_groupoid: Whether the product is defined in the Lenz groupoid.
    :param clauses: ``sources_match``, ``meets_products`` and ``no_stray_products``.
    """

    left: FilterSet
    right: FilterSet
    product: FilterSet
    defined_in_groupoid: bool
    clauses: t.Dict[str, bool]

    def as_dict(self) -> t.Dict[str, t.Any]:
        return {
            "left": list(self.left.ids()),
            "right": list(self.right.ids()),
            "product": list(self.product.ids()),
            "defined_in_groupoid": self.defined_in_groupoid,
            "clauses": dict(self.clauses),
        }


def lenz_product(S: FiniteInverseSemigroup, T: FilterSet, U: FilterSet) -> FilterProductResult:
    """Compute ``T·U = (TU)^<=`` and decide whether it is defined in the Lenz groupoid.

    :raises stonework.errors.NotAFilter: If ``T`` or ``U`` is not a nonempty ≤-filter.
    :raises stonework.errors.ConsistencyError: If the product is no filter or the clauses
        disagree.
    """
    t_mask, u_mask = _check_leq_filter(S, T), _check_leq_filter(S, U)
    P = isg.natural_poset(S)
    product = up(S, products(S, t_mask, u_mask))
    result = filters.from_mask(P, "leq", product)
    errors.ensure(
        filters.filter_failure(S.leq, product) is None, "Lenz product is a filter", result.ids()
    )

    tt = products(S, inverses(S, t_mask), t_mask)
    uu = products(S, u_mask, inverses(S, u_mask))
    meet = tt & uu
    stray = ~up(S, meet)
    clauses = {
        "sources_match": _same(up(S, tt), up(S, uu)),
        "meets_products": _same(meet, products(S, tt, uu)),
        "no_stray_products": not (
            products(S, t_mask, u_mask) & products(S, products(S, t_mask, stray), u_mask)
        ).any(),
    }
    agree = len(set(clauses.values())) == 1
    errors.ensure(agree, "Lenz definedness clauses agree", T.ids() + U.ids())
    return FilterProductResult(
        left=T,
        right=U,
        product=result,
        defined_in_groupoid=clauses["sources_match"],
        clauses=clauses,
    )


def filter_identities(S: FiniteInverseSemigroup) -> t.Dict[str, int]:
    """Check the auxiliary filter facts over all pairs of nonempty ≤-filters.

    :return: How many filters and pairs were checked.
    :raises stonework.errors.ConsistencyError: On the first failure.
    """
    P = isg.natural_poset(S)
    nonempty = [U.mask for U in filters.all_filters(P, "leq") if U.members]
    for U in nonempty:
        errors.ensure(
            _same(U, products(S, products(S, U, inverses(S, U)), U)),
            "filters satisfy U = UU⁻¹U",
            P.ids(_members(U)),
        )
    for T, U in itertools.product(nonempty, repeat=2):
        tt = products(S, inverses(S, T), T)
        absorbed = not (products(S, tt, U) & ~U).any()
        errors.ensure(
            (not (tt & ~target_filter(S, U)).any()) == absorbed,
            "T⁻¹T inside (UU⁻¹)^<= iff T⁻¹TU inside U",
            P.ids(_members(T)) + P.ids(_members(U)),
        )
        if absorbed:
            whole = up(S, products(S, T, U))
            for a in _members(T):
                errors.ensure(
                    _same(up(S, products(S, _singleton(S, a), U)), whole),
                    "(aU)^<= = (TU)^<=",
                    (P.elements[a],) + P.ids(_members(U)),
                )
    return {"filters": len(nonempty), "pairs": len(nonempty) ** 2}


def _ultrafilter_masks(S: FiniteInverseSemigroup) -> t.List[FilterSet]:
    return filters.enumerate_prec_ultrafilters(isg.natural_poset(S))


def _basic_semigroup(S: FiniteInverseSemigroup) -> bool:
    return isg.classify_semigroup(S).flags["basic_semigroup"]


def sg_action(S: FiniteInverseSemigroup, a: str, U: FilterSet) -> t.Dict[str, t.Any]:
    """Evaluate when ``a`` acts on the ultrafilter ``U``.

    The clauses are ``aU`` inside some ultrafilter, ``(aU)^<=`` an ultrafilter, ``a⁻¹a`` in
    ``(UU⁻¹)^<=``, and ``a⁻¹a`` in ``(UU⁻¹)^⌣`` with ``0 ∉ bU`` for some ``b ≺ a``. Their
    agreement is asserted on basic semigroups; elsewhere they are only reported.

    :raises stonework.errors.NotAProperFilter: If ``U`` is not a ≺-ultrafilter.
    """
    P = isg.natural_poset(S)
    ultrafilters = _ultrafilter_masks(S)
    if U.members not in {V.members for V in ultrafilters}:
        raise errors.NotAProperFilter(f"{U!r} is not a ≺-ultrafilter")
    rels = relations.derived(P)
    x = P.index(a)
    mask = U.mask
    acted = products(S, _singleton(S, x), mask)
    image = up(S, acted)
    uu = products(S, mask, inverses(S, mask))
    source = S.source[x]
    inside = [V for V in ultrafilters if not (acted & ~V.mask).any()]
    matching = [V for V in ultrafilters if (V.mask == image).all()]
    below = np.flatnonzero(rels.prec.rel[:, x])
    shrunk = [b for b in below if not products(S, _singleton(S, b), mask)[S.zero]]
    clauses = {
        "inside_ultrafilter": bool(inside),
        "image_is_ultrafilter": bool(matching),
        "source_in_range": bool(up(S, uu)[source]),
        "hausdorff_and_nonzero": bool(rels.smile.rel[uu, source].any()) and bool(shrunk),
    }
    asserted = _basic_semigroup(S)
    if asserted:
        errors.ensure(len(set(clauses.values())) == 1, "action clauses agree", (a, U.label))
    else:
        logger.warning(f"Action clauses not asserted on {S!r}: not a basic semigroup.")
    return {
        "element": a,
        "ultrafilter": U.label,
        "clauses": clauses,
        "asserted": asserted,
        "image": matching[0].label if matching else None,
    }


def ultrafilter_groupoid(
    S: FiniteInverseSemigroup,
) -> t.Tuple[FiniteGroupoid, t.Dict[str, t.Tuple[str, ...]]]:
    """Multiply the ≺-ultrafilters of a basic semigroup into an étale groupoid.

    ``U·V = (UV)^<=`` is defined iff ``(U⁻¹U)^<= = (VV⁻¹)^<=`` and ``U⁻¹`` is ``(U⁻¹)^<=``.

    :return: The groupoid and the map from each element ``a`` to the arrows of ``O_a``.
    :raises stonework.errors.NotBasicSemigroup: Unless ``S`` is a basic semigroup.
    """
    classification = isg.classify_semigroup(S)
    if not classification.flags["basic_semigroup"]:
        raise errors.NotBasicSemigroup(f"{S!r} is not a basic semigroup")
    ultrafilters = _ultrafilter_masks(S)
    masks = [U.mask for U in ultrafilters]
    arrows = [U.label for U in ultrafilters]
    lookup = {tuple(m): i for i, m in enumerate(masks)}

    def find(mask: np.ndarray, assertion: str, witness: t.Tuple[str, ...]) -> int:
        found = lookup.get(tuple(mask))
        errors.ensure(found is not None, assertion, witness)
        return t.cast(int, found)

    sources = [source_filter(S, m) for m in masks]
    targets = [target_filter(S, m) for m in masks]
    product = []
    for (i, U), (j, V) in itertools.product(enumerate(masks), repeat=2):
        if (sources[i] == targets[j]).all():
            k = find(up(S, products(S, U, V)), "ultrafilters multiply", (arrows[i], arrows[j]))
            product.append((arrows[i], arrows[j], arrows[k]))
    inv = [
        arrows[find(up(S, inverses(S, m)), "ultrafilters invert", (arrows[i],))]
        for i, m in enumerate(masks)
    ]
    by_arrow = {(g, h): gh for g, h, gh in product}
    units = [g for g, g_inv in zip(arrows, inv) if g_inv == g and by_arrow.get((g, g)) == g]
    try:
        G = validate_groupoid(arrows, product, inv, units, cap=len(arrows))
    except errors.NotAGroupoid as exc:
        raise errors.ConsistencyError("ultrafilters form a groupoid", exc.witness) from exc

    opens = [frozenset(i for i, m in enumerate(masks) if m[a]) for a in range(S.size)]
    P = isg.natural_poset(S)
    for a, b in itertools.product(range(S.size), repeat=2):
        errors.ensure(
            set_inverse(G, opens[a]) == opens[S.inv[a]], "O_a inverse is O_(a⁻¹)", (P.elements[a],)
        )
        errors.ensure(
            opens[S.mult[a, b]] == set_product(G, opens[a], opens[b]),
            "O_ab = O_a·O_b",
            (P.elements[a], P.elements[b]),
        )
    _check_factorizations(S, masks)
    if classification.flags["simeq_basic"]:
        report = etale_basis_report(G, opens)
        for clause in ("inverse", "product", "union"):
            found = report[clause]
            errors.ensure(found.holds, f"∪-étale basis clause {clause}", found.witness or ())
    logger.info(f"Ultrafilter groupoid of {S!r} is {G!r}.")
    return G, {P.elements[a]: G.ids(sorted(O)) for a, O in enumerate(opens)}


def _check_factorizations(S: FiniteInverseSemigroup, masks: t.Sequence[np.ndarray]) -> None:
    """Every ``W`` containing ``ab`` is ``(UV)^<=`` for ``U = (Wb⁻¹)^<=`` and ``V = (a⁻¹W)^<=``."""
    P = isg.natural_poset(S)
    for W in masks:
        for a, b in np.argwhere(W[S.mult]):
            U = up(S, products(S, W, _singleton(S, S.inv[b])))
            V = up(S, products(S, _singleton(S, S.inv[a]), W))
            witness = (P.elements[a], P.elements[b]) + P.ids(_members(W))
            for factor in (U, V):
                failure = filters.filter_failure(S.leq, factor)
                errors.ensure(failure is None, "factors are filters", witness)
            composable = _same(source_filter(S, U), target_filter(S, V))
            errors.ensure(composable, "factors are composable", witness)
            errors.ensure(_same(up(S, products(S, U, V)), W), "factors multiply back", witness)


def groupoid_to_semigroup(
    G: FiniteGroupoid, basis: t.Sequence[ArrowSet]
) -> t.Tuple[FiniteInverseSemigroup, t.Dict[str, t.Any]]:
    """Turn an étale basis into an inverse semigroup under pointwise operations.

    :return: The semigroup, whose element ``O`` is labelled by its arrows, and a report of the
        étale clauses and the ultrafilter multiplication checks.
    :raises stonework.errors.NotEtaleBasis: Naming the first failing clause.
    """
    clauses = etale_basis_report(G, basis)
    for clause in ("discrete", "inverse", "product", "units"):
        if not clauses[clause].holds:
            raise errors.NotEtaleBasis(clause, clauses[clause].witness or ())
    X = topology.space(G.arrows, [G.ids(B) for B in basis])
    sets = X.basis
    index = {B: i for i, B in enumerate(sets)}
    labels = [G.label(B) for B in sets]
    mult = [[labels[index[set_product(G, O, N)]] for N in sets] for O in sets]
    inv = [labels[index[set_inverse(G, O)]] for O in sets]
    S = isg.validate_isg(labels, mult, inv, G.label(()), cap=len(sets))

    compat = isg.compatibility(S).rel
    for i, O in enumerate(sets):
        for j, N in enumerate(sets):
            pair = (labels[i], labels[j])
            errors.ensure(bool(S.leq[i, j]) == (O <= N), "semigroup order is inclusion", pair)
            bisection = is_bisection(G, O | N)
            errors.ensure(bool(compat[i, j]) == bisection, "compatible iff bisection union", pair)
    if clauses["union"].holds:
        simeq_basic = isg.classify_semigroup(S).flags["simeq_basic"]
        errors.ensure(simeq_basic, "∪-étale bases are simeq basic")

    multiplication = _ultrafilter_multiplication(G, X, S)
    report = {
        "clauses": {k: v.as_dict() for k, v in clauses.items()},
        "ultrafilter_multiplication": multiplication,
    }
    logger.info(f"Semigroup of {G!r} from {len(sets)} basis sets is {S!r}.")
    return S, report


def _ultrafilter_multiplication(
    G: FiniteGroupoid, X: "topology.FiniteSpace", S: FiniteInverseSemigroup
) -> t.Dict[str, int]:
    """Check ``U_gh = (U_gU_h)^⊆`` and compare definedness with the two filter criteria."""
    point_filters = [np.array([g in B for B in X.basis]) for g in range(G.size)]
    t0, t1 = topology.is_t0(X), topology.is_t1(X)
    defined = 0
    for g, h in itertools.product(range(G.size), repeat=2):
        Ug, Uh = point_filters[g], point_filters[h]
        witness = (G.arrows[g], G.arrows[h])
        composable = G.product[g, h] != ABSENT
        if composable:
            defined += 1
            errors.ensure(
                _same(point_filters[G.product[g, h]], up(S, products(S, Ug, Uh))),
                "U_gh = (U_gU_h)^⊆",
                witness,
            )
        common = functools.reduce(
            frozenset.intersection,
            (X.basis[k] for k in _members(products(S, Ug, Uh))),
            frozenset(range(G.size)),
        )
        sources_match = _same(source_filter(S, Ug), target_filter(S, Uh))
        if composable:
            met = bool(common) and sources_match
            errors.ensure(met, "defined products meet both criteria", witness)
        if t1:
            errors.ensure(composable == bool(common), "T1: defined iff products meet", witness)
        if t0:
            errors.ensure(composable == sources_match, "T0: defined iff sources match", witness)
    return {"pairs": G.size**2, "defined": defined}


def find_groupoid_isomorphism(
    G: FiniteGroupoid, H: FiniteGroupoid
) -> t.Optional[t.Dict[str, str]]:
    """Search for an arrow bijection preserving products, inverses and units.

    :raises stonework.errors.CarrierTooLarge: Above :data:`ISOMORPHISM_CAP` arrows.
    """
    if max(G.size, H.size) > ISOMORPHISM_CAP:
        raise errors.CarrierTooLarge(max(G.size, H.size), ISOMORPHISM_CAP, "isomorphism search")
    if G.size != H.size or G.units.sum() != H.units.sum():
        return None
    # units first so that sources and targets are mapped before the arrows using them
    order_ = sorted(range(G.size), key=lambda g: (not G.units[g], g))
    image = np.full(G.size, ABSENT, dtype=np.int64)
    used = np.zeros(H.size, dtype=bool)

    def consistent(g: int) -> bool:
        f = image[g]
        if G.units[g] != H.units[f]:
            return False
        for k in np.flatnonzero(image != ABSENT):
            fk = image[k]
            for left, right, mapped_left, mapped_right in ((g, k, f, fk), (k, g, fk, f)):
                gk, hk = G.product[left, right], H.product[mapped_left, mapped_right]
                if (gk == ABSENT) != (hk == ABSENT):
                    return False
                if gk != ABSENT and image[gk] != ABSENT and image[gk] != hk:
                    return False
            if G.inv[g] == k and H.inv[f] != fk:
                return False
        return True

    def assign(position: int) -> bool:
        if position == len(order_):
            return True
        g = order_[position]
        for f in np.flatnonzero(~used):
            image[g] = f
            used[f] = True
            if consistent(g) and assign(position + 1):
                return True
            image[g] = ABSENT
            used[f] = False
        return False

    if not assign(0):
        return None
    mapping = {G.arrows[g]: H.arrows[image[g]] for g in range(G.size)}
    for g, h in np.argwhere(G.product != ABSENT):
        preserved = H.product[image[g], image[h]] == image[G.product[g, h]]
        errors.ensure(bool(preserved), "isomorphism preserves products")
    return mapping


def groupoid_round_trip(G: FiniteGroupoid, basis: t.Sequence[ArrowSet]) -> bool:
    """Whether the ultrafilter groupoid of the semigroup of ``basis`` is isomorphic to ``G``."""
    S, _ = groupoid_to_semigroup(G, basis)
    H, _ = ultrafilter_groupoid(S)
    mapping = find_groupoid_isomorphism(G, H)
    logger.info(f"Groupoid round trip for {G!r}: {mapping is not None}.")
    return mapping is not None


def morphism_multiplicativity(
    m: morphisms.BasicMorphismRel, S: FiniteInverseSemigroup, T: FiniteInverseSemigroup
) -> AxiomReport:
    """Check that ``⊏`` respects products and inverses.

    That is ``a ⊏ a'`` and ``b ⊏ b'`` imply ``ab ⊏ a'b'``, and ``a ⊏ a'`` implies ``a⁻¹ ⊏ a'⁻¹``.
    The relation is read off ``m`` by element id, so its posets must carry the ids of ``S`` and
    ``T``.

    :raises stonework.errors.UnknownElement: If an element of ``S`` or ``T`` is missing from ``m``.
    """
    rows = [m.source.index(a) for a in S.elements]
    columns = [m.target.index(b) for b in T.elements]
    rel = m.rel[np.ix_(rows, columns)]
    for a, a2 in np.argwhere(rel):
        if not rel[S.inv[a], T.inv[a2]]:
            return AxiomReport("multiplicative", False, (S.elements[a], T.elements[a2]))
        # [b, b']: b ⊏ b' but not ab ⊏ a'b'
        failing = rel & ~rel[S.mult[a][:, None], T.mult[a2][None, :]]
        if failing.any():
            b, b2 = np.argwhere(failing)[0]
            return AxiomReport(
                "multiplicative",
                False,
                (S.elements[a], T.elements[a2], S.elements[b], T.elements[b2]),
            )
    return AxiomReport("multiplicative", True)


def semigroup_round_trip(S: FiniteInverseSemigroup) -> bool:
    """Whether ``a ↦ O_a`` is an isomorphism onto the semigroup of the sets ``O_a``.

    :raises stonework.errors.NotBasicSemigroup: Unless ``S`` is a basic semigroup.
    """
    G, set_map = ultrafilter_groupoid(S)
    opens = {a: frozenset(G.index(g) for g in arrows) for a, arrows in set_map.items()}
    basis = sorted(set(opens.values()), key=lambda B: (len(B), sorted(B)))
    T, _ = groupoid_to_semigroup(G, basis)
    image = [T.index(G.label(opens[a])) for a in S.elements]
    if len(set(image)) != S.size or T.size != S.size:
        logger.info(f"Sets O_a of {S!r} are not pairwise distinct.")
        return False
    result = bool((T.mult[np.ix_(image, image)] == np.array(image)[S.mult]).all())
    result = result and bool((T.inv[image] == np.array(image)[S.inv]).all())
    logger.info(f"Semigroup round trip for {S!r}: {result}.")
    return result
