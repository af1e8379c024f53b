"""Exception hierarchy.

Input and precondition problems map to exit code 2, failed internal cross-checks to exit code 1.
Properties that simply do not hold on a structure are reported as data and never raised.
"""
import typing as t


Witness = t.Tuple[t.Any, ...]


class StoneworkError(Exception):
    """Base class of all stonework errors."""


class InputError(StoneworkError):
    """Error caused by the user's input."""


class ParseError(InputError):
    """A structure file is not valid JSON."""

    def __init__(self, path: str, line: int, column: int, msg: str) -> None:
        self.path = path
        self.line = line
        self.column = column
        super().__init__(f"{path}:{line}:{column}: {msg}")


class SchemaError(InputError):
    """A structure file does not match its schema."""

    def __init__(self, path: str, field: str, msg: str) -> None:
        self.path = path
        self.field = field
        super().__init__(f"{path}: field '{field}': {msg}")


class StructureError(InputError):
    """A structure violates one of its defining laws.

    :param witness: Element ids demonstrating the violation.
    """

    law = "structure"

    def __init__(self, witness: Witness, msg: t.Optional[str] = None) -> None:
        self.witness = tuple(witness)
        super().__init__(msg or f"{self.law} violated by {self.witness}")


class NotReflexive(StructureError):
    law = "reflexivity"


class NotAntisymmetric(StructureError):
    law = "antisymmetry"


class NotTransitive(StructureError):
    law = "transitivity"


class NoMinimum(StructureError):
    law = "minimum"


class NotAssociative(StructureError):
    law = "associativity"


class NotInverse(StructureError):
    law = "inverse"


class NoZero(StructureError):
    law = "zero"


class NotAGroupoid(StructureError):
    law = "groupoid"


class NotABasis(StructureError):
    law = "basis"


class UnknownElement(InputError):
    """An element id is not part of the carrier."""


class UnknownAxiom(InputError):
    """An axiom id is not registered."""


class UnknownFixture(InputError):
    """A fixture name is not registered."""


class CarrierTooLarge(InputError):
    """The carrier exceeds a configured cap."""

    def __init__(self, size: int, cap: int, what: str = "carrier") -> None:
        self.size = size
        self.cap = cap
        super().__init__(f"{what} has {size} elements, cap is {cap}")


class PreconditionError(InputError):
    """An operation was called on a structure outside its domain."""


class NotBasic(PreconditionError):
    pass


class NotBasicSemigroup(PreconditionError):
    pass


class NotAUnionBasis(PreconditionError):
    pass


class NotEtaleBasis(PreconditionError):
    """The basis fails an étale clause.

    :param clause: Name of the failing clause.
    """

    def __init__(self, clause: str, witness: Witness) -> None:
        self.clause = clause
        self.witness = tuple(witness)
        super().__init__(f"étale basis clause {clause} fails at {self.witness}")


class NotAFilter(PreconditionError):
    pass


class NotAProperFilter(PreconditionError):
    pass


class ElementNotInFilter(PreconditionError):
    pass


class NotBasicMorphism(PreconditionError):
    pass


class NotContinuous(PreconditionError):
    pass


class DomainNotOpen(PreconditionError):
    pass


class SourceTargetMismatch(PreconditionError):
    pass


class ConsistencyError(StoneworkError):
    """An asserted theorem or cross-check disagreed with the computation.

    :param assertion: Name of the failed assertion.
    :param witness: Data demonstrating the disagreement.
    """

    def __init__(self, assertion: str, witness: Witness = ()) -> None:
        self.assertion = assertion
        self.witness = tuple(witness)
        super().__init__(f"consistency check '{assertion}' failed at {self.witness}")


class LemmaViolated(ConsistencyError):
    pass


def ensure(condition: bool, assertion: str, witness: Witness = ()) -> None:
    """Raise :class:`ConsistencyError` unless ``condition`` holds."""
    if not condition:
        raise ConsistencyError(assertion, witness)
