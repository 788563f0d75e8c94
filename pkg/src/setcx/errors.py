"""Exception types raised across the package."""


class SetcxError(Exception):
    """Base class for all package errors."""


class DomainError(SetcxError, ValueError):
    """An argument lies outside the domain of an operation."""


class ConfigurationError(SetcxError, ValueError):
    """An invalid compressor, experiment or CLI configuration."""


class CalibrationError(SetcxError, ValueError):
    """The observable distance range of a set is degenerate."""


class FormatError(SetcxError, ValueError):
    """A malformed input file. ``line`` is 1-based when known."""

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where += f"{path}"
        if line is not None:
            where += f":{line}" if where else f"line {line}"
        super().__init__(f"{where}: {message}" if where else message)
