"""Exception hierarchy.

Every error raised by the library derives from :class:`KSError`.  Errors that
report bad caller input also derive from :class:`ValueError`.
"""


class KSError(Exception):
    """Base class for all library errors."""


class GraphParseError(KSError, ValueError):
    pass


class InvalidGraph(KSError, ValueError):
    pass


class NotConnected(InvalidGraph):
    pass


class DimensionMismatch(KSError, ValueError):
    pass


class InvalidDimension(KSError, ValueError):
    pass


class InvalidRange(KSError, ValueError):
    pass


class InvalidGamma(InvalidRange):
    pass


class NotCohesive(KSError, ValueError):
    pass


class NonIntegerWinding(KSError, ArithmeticError):
    """A cycle sum of counterclockwise differences is not a multiple of 2*pi.

    This never happens for valid data; it indicates a numerical bug.
    """


class KernelNotInvariant(KSError, ValueError):
    pass


class InconsistentCell(KSError, ArithmeticError):
    pass


class CycleInconsistent(KSError, ArithmeticError):
    pass


class NonFiniteState(KSError, FloatingPointError):
    pass


class SolverError(KSError, RuntimeError):
    pass


class SingularJacobian(SolverError):
    pass


class MaxIterations(SolverError):
    pass
