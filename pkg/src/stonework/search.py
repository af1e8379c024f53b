"""Seeded generators of finite structures and the counterexample searcher.

Every generator is a pure function of the ``random.Random`` it is handed, so a seed fixes the whole
search and its report.
"""
import functools
import itertools
import logging
import random
import typing as t

import numpy as np

from . import axioms, config, errors, filters, isg, order
from .isg import FiniteInverseSemigroup
from .order import FinitePoset


logger = logging.getLogger(__name__)

#: Largest carrier of the exhaustive poset phase, bottom included.
EXHAUSTIVE_LIMIT = 7
#: Largest degree ``n`` of the symmetric inverse monoids subsemigroups are drawn from.
MAX_DEGREE = 3

FILTER_FLAGS = ("maximal", "complementary", "prime")
SEMIGROUP_FLAGS = (
    "basic_semigroup",
    "simeq_basic",
    "E_distributive",
    "S_distributive",
    "leq_distributive",
    "leq_decomposition",
)
CLASSIFY_FLAGS = (
    "basic_poset",
    "smile_basic",
    "local_boolean",
    "generalized_boolean",
    "boolean",
    "conditional_join_semilattice",
    "leq_equals_prec",
    "has_maximum",
    "wedge_joins",
)


def _closure(leq: np.ndarray) -> np.ndarray:
    for k in range(leq.shape[0]):
        leq |= leq[:, k : k + 1] & leq[k : k + 1, :]
    return leq


def _with_bottom(upper: np.ndarray) -> FinitePoset:
    """Adjoin a bottom ``0`` below an order on ``1..n``."""
    n = upper.shape[0] + 1
    leq = np.zeros((n, n), dtype=bool)
    leq[0] = True
    leq[1:, 1:] = upper
    return order.poset_from_matrix([str(i) for i in range(n)], leq, "0", cap=n)


def random_poset(rng: random.Random, size: int) -> FinitePoset:
    """A random order on ``size - 1`` naturally labelled elements plus an adjoined bottom."""
    m = max(size - 1, 0)
    density = rng.random()
    upper = np.eye(m, dtype=bool)
    for i, j in itertools.combinations(range(m), 2):
        upper[i, j] = rng.random() < density
    return _with_bottom(_closure(upper))


def random_basic_poset(rng: random.Random, max_size: int) -> FinitePoset:
    """A random down-closed family of subsets of a small set, ordered by inclusion.

    Bounded pairs of such a family are joined by their union, so the result is a basic poset.
    """
    ground = rng.randint(1, 4)
    family: t.Set[t.FrozenSet[int]] = {frozenset()}
    for _ in range(2 * ground):
        face = frozenset(x for x in range(1, ground + 1) if rng.random() < 0.5)
        sizes = range(len(face) + 1)
        below = {frozenset(c) for k in sizes for c in itertools.combinations(face, k)}
        if len(family | below) <= max_size:
            family |= below
    sets = sorted(family, key=lambda s: (len(s), sorted(s)))
    labels = ["{" + ",".join(str(x) for x in sorted(s)) + "}" for s in sets]
    leq = np.array([[s <= r for r in sets] for s in sets], dtype=bool)
    return order.poset_from_matrix(labels, leq, "{}", cap=len(sets))


@functools.lru_cache(maxsize=None)
def _monoid(degree: int) -> FiniteInverseSemigroup:
    return isg.symmetric_inverse_monoid(degree, cap=max(config.default_cap(), 34))


def random_inverse_semigroup(rng: random.Random, degree: int) -> FiniteInverseSemigroup:
    """The inverse subsemigroup of ``I({1..degree})`` generated by a few random elements."""
    monoid = _monoid(degree)
    count = rng.randint(1, 3)
    generators = [monoid.elements[rng.randrange(monoid.size)] for _ in range(count)]
    return isg.inverse_subsemigroup(monoid, generators)


def naturally_labelled_posets(size: int) -> t.Iterator[FinitePoset]:
    """Every order on ``1..size-1`` refining the natural order, each with a bottom adjoined."""
    m = size - 1
    cells = list(itertools.combinations(range(m), 2))
    for bits in itertools.product((False, True), repeat=len(cells)):
        upper = np.eye(m, dtype=bool)
        for (i, j), bit in zip(cells, bits):
            upper[i, j] = bit
        if (_closure(upper.copy()) == upper).all():
            yield _with_bottom(upper)


def _subsemigroups(size: int) -> t.Iterator[FiniteInverseSemigroup]:
    seen: t.Set[t.Tuple[str, ...]] = set()
    for degree in range(1, min(size, MAX_DEGREE) + 1):
        monoid = _monoid(degree)
        for k in (1, 2):
            for generators in itertools.combinations(monoid.elements, k):
                S = isg.inverse_subsemigroup(monoid, generators)
                if S.elements not in seen:
                    seen.add(S.elements)
                    yield S


def property_domain(name: str) -> str:
    """``poset``, ``filter`` or ``isg``, by the property name.

    :raises stonework.errors.UnknownAxiom: If no property has this name.
    """
    if name in FILTER_FLAGS:
        return "filter"
    if name in SEMIGROUP_FLAGS:
        return "isg"
    if name in axioms.AXIOMS or name in CLASSIFY_FLAGS:
        return "poset"
    raise errors.UnknownAxiom(f"unknown property: {name!r}")


def _poset_property(P: FinitePoset, name: str) -> bool:
    if name in CLASSIFY_FLAGS:
        return axioms.classify(P).flags[name]
    return axioms.check_axiom(P, name).holds


def _semigroup_property(S: FiniteInverseSemigroup, name: str) -> bool:
    if name in ("basic_semigroup", "simeq_basic"):
        return isg.classify_semigroup(S).flags[name]
    return bool(isg.distributivity_suite(S)["flags"][name])


def _separating_filter(P: FinitePoset, holds: str, fails: str) -> t.Optional[filters.FilterSet]:
    proper = [U for U in filters.all_filters(P, "prec") if U.members and filters.is_proper(U)]
    for U in proper:
        flags = filters.ultrafilter_characterizations(P, U)
        if flags[holds] and not flags[fails]:
            return U
    return None


def _separates(structure: t.Any, holds: str, fails: str, domain: str) -> t.Optional[t.Any]:
    """The separating structure, with its filter for filter properties, or ``None``."""
    if domain == "isg":
        ok = _semigroup_property(structure, holds) and not _semigroup_property(structure, fails)
        return structure if ok else None
    if domain == "filter":
        U = _separating_filter(structure, holds, fails)
        return None if U is None else (structure, U)
    if _poset_property(structure, holds) and not _poset_property(structure, fails):
        return structure
    return None


def _candidates(
    domain: str, settings: config.StoneworkConfig, rng: random.Random
) -> t.Iterator[t.Tuple[str, t.Any]]:
    size = settings.search_size
    if domain == "isg":
        yield from (("exhaustive", S) for S in _subsemigroups(size))
        for _ in range(settings.search_budget):
            yield "random", random_inverse_semigroup(rng, rng.randint(1, MAX_DEGREE))
        return
    limit = min(size, EXHAUSTIVE_LIMIT)
    if limit < size:
        logger.warning(f"Exhaustive phase stops at {limit} elements, not {size}.")
    for n in range(1, limit + 1):
        yield from (("exhaustive", P) for P in naturally_labelled_posets(n))
    largest = min(size + 3, settings.oracle_cap, settings.cap)
    for _ in range(settings.search_budget):
        yield "random", random_poset(rng, rng.randint(2, max(largest, 2)))


def search_counterexamples(
    holds: str, fails: str, settings: t.Optional[config.StoneworkConfig] = None
) -> t.Dict[str, t.Any]:
    """Look for a structure on which ``holds`` is true and ``fails`` is false.

    The exhaustive phase enumerates small structures, then ``search_budget`` seeded random draws
    follow. Filter properties ask for a single proper ≺-filter separating the two.

    :raises stonework.errors.UnknownAxiom: On an unknown property.
    :raises stonework.errors.InputError: If the two properties live on different structures.
    """
    settings = settings or config.StoneworkConfig()
    domain = property_domain(holds)
    if property_domain(fails) != domain:
        raise errors.InputError(f"properties {holds!r} and {fails!r} cannot be compared")
    rng = random.Random(settings.seed)
    report: t.Dict[str, t.Any] = {
        "target": {"holds": holds, "fails": fails},
        "domain": domain,
        "seed": settings.seed,
        "size": settings.search_size,
        "budget": settings.search_budget,
    }
    examined = 0
    for phase, structure in _candidates(domain, settings, rng):
        examined += 1
        found = _separates(structure, holds, fails, domain)
        if found is None:
            continue
        logger.info(f"Found a separating structure in the {phase} phase after {examined}.")
        if domain == "filter":
            structure, U = found
            report["filter"] = list(U.ids())
        report.update(examined=examined, phase=phase, found=structure.as_dict())
        return report
    logger.info(f"No structure separates {holds} from {fails} in {examined} candidates.")
    report.update(examined=examined, phase=None, found=None, message="none found up to cap")
    return report
