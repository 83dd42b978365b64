"""Exception types shared across the package."""


class BuresepError(Exception):
    """Base class for all package errors."""


class UsageError(BuresepError):
    """A caller violated a precondition (bad arguments, missing metadata)."""


class DomainError(BuresepError):
    """An evaluation was requested outside a function's or family's domain."""


class NumericalError(BuresepError):
    """A numerical routine failed to converge or produced invalid output."""
