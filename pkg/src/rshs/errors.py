"""Exception hierarchy shared by all modules."""


class RshsError(Exception):
    """Base class for every error raised by this package."""


class DomainError(RshsError, ValueError):
    """An input lies outside the domain of a map (e.g. non-positive temperature)."""


class ValidationError(RshsError, ValueError):
    """Malformed input: wrong shape, non-symmetric tensor, non-zero trace."""


class PreconditionError(RshsError, ValueError):
    """A documented precondition of an operation does not hold."""


class StructuralError(RshsError):
    """A structural property (e.g. positive definiteness) fails where it is required."""


class NumericalError(RshsError):
    """Eigen-solver failure or another numerical breakdown."""


class InversionError(NumericalError):
    """Newton inversion from conserved to Godunov variables failed.

    ``cells`` holds the indices of the offending cells (empty for scalar input).
    """

    def __init__(self, message, cells=(), states=None):
        super().__init__(message)
        self.cells = tuple(int(c) for c in cells)
        self.states = states


class ConfigError(RshsError, ValueError):
    """Invalid run configuration."""
