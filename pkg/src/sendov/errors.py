"""Exception hierarchy.

Property failures are never exceptions; they are report entries. These
classes mark infrastructure problems (bad input, solver breakdown).
"""


class SendovError(Exception):
    pass


class ParameterError(SendovError, ValueError):
    """Malformed or structurally invalid candidate input."""


class RootFindingError(SendovError, ArithmeticError):
    """The polynomial root finder failed to converge."""


class VariationalError(SendovError, ArithmeticError):
    """A root sensitivity is undefined (e.g. a non-simple root)."""
