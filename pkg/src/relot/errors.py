"""Exception types raised by relot."""


class RelotError(Exception):
    """Base class for all relot errors."""


class GeometryError(RelotError, ValueError):
    """Invalid metric pair description (asymmetric matrix, negative d_A, ...)."""


class MeasureError(RelotError, ValueError):
    """Invalid measure data: negative or non-finite weights, unknown points."""


class PairMismatchError(RelotError, ValueError):
    """Operands live on different metric pairs."""


class InstanceTooLargeError(RelotError, ValueError):
    """An oracle was asked to solve an instance beyond its size limit."""


class SolverError(RelotError, RuntimeError):
    """The solver failed to reach a certified optimum."""
