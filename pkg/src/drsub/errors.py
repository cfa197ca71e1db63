"""Exception hierarchy shared by every module."""


class DrsubError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(DrsubError, ValueError):
    pass


class StructuralViolation(DrsubError, ValueError):
    pass


class OutOfDomain(DrsubError, ValueError):
    pass


class SingularMatrix(DrsubError, ArithmeticError):
    pass


class NonDifferentiable(DrsubError, TypeError):
    pass


class IndexOutOfRange(DrsubError, IndexError):
    pass


class BadSignVector(DrsubError, ValueError):
    pass


class NegativeCap(DrsubError, ValueError):
    pass


class MalformedInput(DrsubError, ValueError):
    pass


class NotMonotone(DrsubError, ValueError):
    pass


class NotDr(DrsubError, ValueError):
    pass


class BadConstraint(DrsubError, ValueError):
    pass


class MissingLipschitz(DrsubError, ValueError):
    pass


class PreconditionViolated(DrsubError, ValueError):
    pass


class EmptyInterval(DrsubError, ValueError):
    pass


class TooLarge(DrsubError, ValueError):
    pass


class TooLargeForTable(TooLarge):
    pass


class TooHighDimensional(DrsubError, ValueError):
    pass


class BadSet(DrsubError, ValueError):
    pass


class ElementInSet(DrsubError, ValueError):
    pass


class MissingGap(DrsubError, ValueError):
    pass


class GraphParseError(DrsubError, ValueError):
    pass


class NegativeWeight(GraphParseError):
    pass


class InvariantViolation(DrsubError, AssertionError):
    """A runtime invariant of an algorithm failed (e.g. the shrunken-FW growth cap)."""


class TooCloseToBoundary(UserWarning):
    """Finite differences fell back to a one-sided stencil near the box boundary."""
