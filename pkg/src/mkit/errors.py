class MatroidError(Exception):
    pass


class DomainError(MatroidError, ValueError):
    """Argument outside the domain of an operation (bad element, bad parameters, ...)."""


class CapacityError(MatroidError):
    """An exponential enumeration would exceed the configured ground-set bound."""


class InvariantViolation(MatroidError, AssertionError):
    """A proven identity failed on a concrete instance. Always a bug somewhere."""
