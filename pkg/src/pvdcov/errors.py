"""Exception hierarchy shared by every module of the package."""


class PvdCovError(Exception):
    """Base class for all package errors."""


class InvalidInputError(PvdCovError, ValueError):
    """Data or matrix input violates a precondition (non-finite, wrong shape, ...)."""


class InvalidArgumentError(PvdCovError, ValueError):
    """A scalar/config argument is out of range."""


class DegenerateScreeningError(PvdCovError):
    """Pivotal-variable detection returned too few indices for the next stage."""


class GeneratorError(PvdCovError):
    """A simulation model could not produce a valid covariance matrix."""


class ConfigError(PvdCovError, ValueError):
    """Run configuration failed validation."""


class DataFormatError(InvalidInputError):
    """A data file could not be parsed.

    Attributes
    ----------
    line : int or None
        1-based line number in the offending file, when known.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
