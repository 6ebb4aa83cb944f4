"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the requested function."""


class ConvergenceError(ArithmeticError):
    """A series or iteration failed to reach its tolerance within its cap."""


class ResourceCapError(MemoryError):
    """A simulation exceeded its configured memory cap."""
