"""Exception hierarchy shared by all modules.

The CLI maps ``ValidationError`` (and subclasses) to exit code 1 and
``SolverError`` to exit code 2.
"""


class D2DError(Exception):
    """Base class for all package errors."""


class ValidationError(D2DError, ValueError):
    """Input failed validation (bad parameter, malformed data, duplicate id)."""


class InvalidParameterError(ValidationError):
    pass


class ParseError(ValidationError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UnsupportedParameterError(ValidationError):
    pass


class SolverError(D2DError, RuntimeError):
    """A numerical or combinatorial solver could not produce a result."""
