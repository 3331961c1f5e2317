"""Exception types shared across the package."""


class AffectSsmlError(Exception):
    """Base class for all errors raised by this package."""


class UsageError(AffectSsmlError):
    """Invalid input values, arguments, or configuration."""


class DataError(AffectSsmlError):
    """Inconsistent or unprocessable data encountered while processing."""


class KappaUndefinedError(DataError):
    """Chance agreement equals 1, so kappa has no defined value."""
