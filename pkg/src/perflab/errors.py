"""Exception and warning types shared across the toolkit."""


class DomainError(ValueError):
    """An argument lies outside the domain of a formula."""


class InsufficientDataError(DomainError):
    """Too few observations for the requested computation."""


class InvalidResolutionError(DomainError):
    """Mesh spacing does not yield an integer number of nodes."""


class CovarianceUnavailableError(RuntimeError):
    """A fit carries no usable coefficient covariance."""


class CSVFormatError(ValueError):
    """Malformed CSV input. ``row`` is the 1-based line number."""

    def __init__(self, message, row=None):
        self.row = row
        if row is not None:
            message = f"line {row}: {message}"
        super().__init__(message)


class ConfigError(ValueError):
    """Invalid or incomplete simulator configuration. ``key`` names the culprit."""

    def __init__(self, message, key=None):
        self.key = key
        super().__init__(message)


class PerflabWarning(UserWarning):
    """Data-quality warnings (ties, floored descriptors, fallbacks)."""
