"""Built-in structures addressable by name, e.g. ``B(3)``, ``I2`` or ``pair(2)``."""
import dataclasses
import functools
import logging
import re
import typing as t

import numpy as np

from . import errors, groupoid, isg, order, topology
from .ingest import Kind, Structure


logger = logging.getLogger(__name__)

_NAME_RE = re.compile(r"^(?P<stem>[A-Za-z][A-Za-z0-9]*?)(?:\((?P<n>\d+)\))?$")

Builder = t.Callable[[int, t.Optional[int]], Structure]


@dataclasses.dataclass(frozen=True)
class Family:
    """A named fixture or fixture family.

    :param pattern: Display name, with ``n`` for the parameter of a family.
    :param description: One line for the listing.
    :param builders: Constructor per kind; the first kind is the default.
    :param sizes: Admissible parameters, ``None`` for a plain fixture.
    """

    pattern: str
    description: str
    builders: t.Dict[Kind, Builder]
    sizes: t.Optional[range] = None

    @property
    def kinds(self) -> t.Tuple[Kind, ...]:
        return tuple(self.builders)


def _points(n: int) -> t.List[str]:
    return [str(i) for i in range(1, n + 1)]


def powerset_poset(n: int) -> order.FinitePoset:
    """Subsets of ``{1..n}`` by inclusion, labelled like ``{1,2}``."""
    return topology.inclusion_poset(topology.discrete_space(_points(n)))


def chain(n: int, *, cap: t.Optional[int] = None) -> order.FinitePoset:
    """``0 < 1 < ... < n-1``."""
    leq = np.triu(np.ones((n, n), dtype=bool))
    return order.poset_from_matrix([str(i) for i in range(n)], leq, "0", cap=cap)


def _z2() -> groupoid.FiniteGroupoid:
    return groupoid.group_groupoid(["e", "g"], [["e", "g"], ["g", "e"]])


def _monoid(degree: int, _n: int, cap: t.Optional[int]) -> Structure:
    return isg.symmetric_inverse_monoid(degree, cap=cap)


def _plain(builder: t.Callable[[], Structure]) -> Builder:
    return lambda _n, _cap: builder()


_FAMILIES: t.Dict[str, Family] = {
    "B": Family(
        "B(n)",
        "powerset of {1..n} as a poset, a meet semigroup or the discrete space",
        {
            Kind.POSET: lambda n, _cap: powerset_poset(n),
            Kind.ISG: lambda n, _cap: isg.semilattice_of_subsets(n),
            Kind.SPACE: lambda n, _cap: topology.discrete_space(_points(n)),
        },
        range(1, 6),
    ),
    "C": Family(
        "C(n)", "the n-element chain", {Kind.POSET: lambda n, cap: chain(n, cap=cap)}, range(1, 65)
    ),
    "discrete": Family(
        "discrete(n)",
        "discrete space on {1..n} with every subset in the basis",
        {Kind.SPACE: lambda n, _cap: topology.discrete_space(_points(n))},
        range(1, 6),
    ),
    "pair": Family(
        "pair(n)",
        "pair groupoid on {1..n}",
        {Kind.GROUPOID: lambda n, _cap: groupoid.pair_groupoid(_points(n))},
        range(1, 5),
    ),
    "EvsSjoins": Family(
        "EvsSjoins",
        "partial bijections where e1∨e2 exists in E but not in S",
        {Kind.ISG: _plain(isg.evs_s_joins)},
    ),
    "SL2": Family(
        "SL2", "two-element semilattice {0,e}", {Kind.ISG: _plain(isg.two_element_semilattice)}
    ),
    "sierpinski": Family(
        "sierpinski", "Sierpiński space on x and y", {Kind.SPACE: _plain(topology.sierpinski_space)}
    ),
    "Z2": Family("Z2", "cyclic group of order two as a groupoid", {Kind.GROUPOID: _plain(_z2)}),
    "unit": Family(
        "unit", "groupoid with a single unit arrow", {Kind.GROUPOID: _plain(groupoid.unit_groupoid)}
    ),
}
for _degree in range(1, 5):
    _FAMILIES[f"I{_degree}"] = Family(
        f"I{_degree}",
        f"symmetric inverse monoid on {{1..{_degree}}}",
        {Kind.ISG: functools.partial(_monoid, _degree)},
    )


def catalogue() -> t.List[t.Dict[str, t.Any]]:
    """Every fixture with its kinds and description."""
    return [
        {
            "name": family.pattern,
            "kinds": [kind.value for kind in family.kinds],
            "description": family.description,
        }
        for family in _FAMILIES.values()
    ]


def _lookup(name: str) -> t.Tuple[Family, int]:
    match = _NAME_RE.match(name.strip())
    family = _FAMILIES.get(match.group("stem")) if match else None
    if family is None or match is None:
        raise errors.UnknownFixture(f"unknown fixture: {name!r}")
    parameter = match.group("n")
    if family.sizes is None:
        if parameter is not None:
            raise errors.UnknownFixture(f"fixture {family.pattern!r} takes no parameter")
        return family, 0
    if parameter is None:
        raise errors.UnknownFixture(f"fixture {family.pattern!r} needs a parameter")
    n = int(parameter)
    if n not in family.sizes:
        raise errors.UnknownFixture(
            f"{name!r}: n must be between {family.sizes.start} and {family.sizes.stop - 1}"
        )
    return family, n


def build(name: str, *, kind: t.Optional[Kind] = None, cap: t.Optional[int] = None) -> Structure:
    """Construct the fixture ``name``.

    :param kind: Form to build, defaults to the first form of the fixture.
    :raises stonework.errors.UnknownFixture: On unknown names, parameters or forms.
    :raises stonework.errors.CarrierTooLarge: If the fixture exceeds the configured cap.
    """
    family, n = _lookup(name)
    chosen = family.kinds[0] if kind is None else kind
    if chosen not in family.builders:
        forms = ", ".join(k.value for k in family.kinds)
        raise errors.UnknownFixture(f"fixture {name!r} has no {chosen.value} form, only {forms}")
    structure = family.builders[chosen](n, cap)
    logger.debug(f"Built fixture {name!r} as {structure!r}.")
    return structure
