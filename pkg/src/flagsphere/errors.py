"""Exception hierarchy.  Every structured failure mode raised by the library
derives from FlagsphereError so callers can catch broadly."""


class FlagsphereError(Exception):
    """Base class for all library errors."""


class DegenerateComplex(FlagsphereError):
    """Rejected at construction: too few vertices, capacity exceeded,
    inconsistent faces, or dimension out of range."""


class FaceNotPresent(FlagsphereError):
    pass


class EdgeNotPresent(FaceNotPresent):
    pass


class VertexNotPresent(FaceNotPresent):
    pass


class NotFlag(FlagsphereError):
    pass


class EdgeInSquare(FlagsphereError):
    """Collapse with flagness preservation requested, but the edge lies in a
    square (an induced 4-cycle)."""


class TooSmall(FlagsphereError):
    pass


class OutOfRange(FlagsphereError):
    pass


class DimensionOverflow(FlagsphereError):
    pass


class TooLarge(FlagsphereError):
    pass


class NotSimplicial(FlagsphereError):
    pass


class DimensionMismatch(FlagsphereError):
    pass


class NotPseudomanifold(FlagsphereError):
    pass


class NotOrientable(FlagsphereError):
    pass


class NotASphere(FlagsphereError):
    pass


class NotPositive(FlagsphereError):
    pass


class InvalidStep(FlagsphereError):
    """An attachment step violates the disc conditions."""


class InvalidReduction(FlagsphereError):
    pass


class InvalidWitness(FlagsphereError):
    pass


class NotAlmostOmniscient(FlagsphereError):
    pass


class ExtensionNotSimplicial(FlagsphereError):
    """The guaranteed extension of a picture map failed validation; indicates
    a bug, never expected on valid inputs."""


class SearchBudgetExceeded(FlagsphereError):
    """A backtracking search hit its node budget.  The verdict is 'unknown',
    which is distinct from 'no map exists'."""

    def __init__(self, message: str, nodes: int = 0):
        super().__init__(message)
        self.nodes = nodes


class ParseError(FlagsphereError):
    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
