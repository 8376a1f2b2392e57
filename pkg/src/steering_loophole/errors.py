"""Exception hierarchy shared by all modules."""


class SteeringError(Exception):
    """Base class for library errors."""


class DomainError(SteeringError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class NormalizationError(DomainError):
    """A vector or ket that must be unit-norm is not."""


class CapacityError(SteeringError):
    """Exhaustive enumeration requested beyond the supported size."""


class AlignmentError(SteeringError):
    """A measurement set cannot be aligned, or is required to be aligned and is not."""


class InsufficientDataError(SteeringError):
    """A tally does not contain enough rounds to form an estimate."""
