class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class CapacityError(RuntimeError):
    """The instance is too large for exact enumeration."""


class InfeasibleError(ValueError):
    """No object with the requested property exists."""
