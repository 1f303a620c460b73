"""Exception types shared across the package.

Every error that can cross the HTTP boundary maps to exactly one wire code
(see server.py); everything else surfaces as INTERNAL.
"""

from __future__ import annotations


class PlotwireError(Exception):
    """Base class for all package errors."""


class ParseError(PlotwireError):
    """Malformed input text (CSV row or expression source).

    ``offset`` is a byte offset for expressions, a 1-based line number for CSV.
    """

    def __init__(self, message: str, offset: int | None = None):
        super().__init__(message)
        self.offset = offset


class SchemaError(PlotwireError):
    """Structurally invalid table schema (e.g. duplicate column names)."""


class FormatError(PlotwireError):
    """Corrupt or truncated PWCT file."""

    def __init__(self, message: str, offset: int | None = None):
        super().__init__(message)
        self.offset = offset


class UnknownNameError(PlotwireError):
    """Reference to a table, column, or function that does not exist."""


class EvalTypeError(PlotwireError):
    """Expression does not type-check against the table schema."""


class ValidationError(PlotwireError):
    """Aggregated per-option plot-spec failures; ``issues`` lists all of them."""

    def __init__(self, issues: list[tuple[str, str]]):
        self.issues = list(issues)
        msg = "; ".join(f"{opt}: {why}" for opt, why in self.issues)
        super().__init__(msg or "invalid plot spec")


class SessionError(PlotwireError):
    """Unknown or expired session id."""


class UnsupportedError(PlotwireError):
    """Operation not applicable to this plot type (e.g. rotate on a 2D plot)."""


class RangeError(PlotwireError):
    """Numeric argument outside its allowed range."""
