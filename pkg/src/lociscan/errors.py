"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: ParameterError -> 2 (usage),
DataError and subclasses -> 3, ProviderError and subclasses -> 4.
"""


class LociscanError(Exception):
    """Base class for all package errors."""


class ParameterError(LociscanError):
    """An operation was called with invalid parameters (usage error)."""


class DataError(LociscanError):
    """Input data violates an operation's preconditions."""


class SchemaError(DataError):
    """A required column is missing from an input file."""


class EmptyInputError(DataError):
    """An input contained rows, but none survived validation."""


class DomainError(DataError):
    """An operation's domain precondition was violated (empty track,
    too few points, zero variance, ...)."""


class ProviderError(LociscanError):
    """A station provider failed or is unreachable."""


class NoStationError(ProviderError):
    """No weather station with overlapping coverage was found."""
