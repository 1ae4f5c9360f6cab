"""Exception hierarchy shared across the package."""


class ZfcError(Exception):
    """Base class for all package errors."""


class DimensionError(ZfcError, ValueError):
    """A vertex index or matrix shape does not fit the declared dimension."""


class DomainError(ZfcError, ValueError):
    """A numeric parameter lies outside its admissible range."""


class SizeGuardError(ZfcError):
    """An exponential-cost routine was asked to handle too large an instance."""


class ParseError(ZfcError, ValueError):
    """Malformed input file."""

    def __init__(self, message: str, line: int | None = None, path: str | None = None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)
