"""Exception types shared across the package."""


class FFDistError(Exception):
    """Base class for all package errors."""


class DomainError(FFDistError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ResourceError(FFDistError):
    """A computation would exceed a configured size cap or budget."""
