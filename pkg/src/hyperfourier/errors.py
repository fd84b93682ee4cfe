"""Exception types shared by all modules."""


class HyperFourierError(Exception):
    """Base class for library errors."""


class DomainError(HyperFourierError, ValueError):
    """An argument lies outside the domain of the operation."""


class NumericalFailure(HyperFourierError, ArithmeticError):
    """A requested tolerance could not be met."""


class BoundaryAmbiguous(DomainError):
    """A point is numerically on a partition boundary arc."""
