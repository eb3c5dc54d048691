"""Exception types shared across the package."""


class MobopcError(Exception):
    """Base class for package errors."""


class InvalidDataError(MobopcError, ValueError):
    """Inputs are malformed (non-finite values, wrong shapes, ...)."""


class NumericError(MobopcError, ArithmeticError):
    """A factorisation failed or a variance came out too negative."""


class ContractError(MobopcError, ValueError):
    """A caller violated a documented precondition."""


class ConfigError(MobopcError, ValueError):
    """A run configuration is invalid."""


class TabularParseError(InvalidDataError):
    """A delimited data file could not be parsed.

    Carries the 1-based data ``row`` and the ``column`` name when known.
    """

    def __init__(self, message, row=None, column=None):
        super().__init__(message)
        self.row = row
        self.column = column
