"""Error types shared across the engine, with SQLSTATE codes for the query layer."""

from __future__ import annotations

# Statement status codes ('SqlState'). Five characters, class-prefixed:
# 00/02 success, 42 syntax or semantic, SP spatial runtime.
SQLSTATE_OK = "00000"
SQLSTATE_EMPTY = "02000"
SQLSTATE_SYNTAX = "42601"
SQLSTATE_UNDEFINED_COLUMN = "42703"
SQLSTATE_UNDEFINED_TABLE = "42P01"
SQLSTATE_TYPE_MISMATCH = "42804"
SQLSTATE_UNDEFINED_ROUTINE = "42883"
SQLSTATE_UNBOUND_PARAM = "42P02"
SQLSTATE_DUPLICATE_TABLE = "42P07"
SQLSTATE_DUPLICATE_ROUTINE = "42723"
SQLSTATE_DIVISION_BY_ZERO = "22012"
SQLSTATE_DEPTH_OVERFLOW = "SP001"
SQLSTATE_OUT_OF_WINDOW = "SP002"
SQLSTATE_CELL_DOMAIN = "SP003"


class CellRangeError(ValueError):
    """A cell address or cell operation is outside its valid domain."""


class DepthOverflowError(CellRangeError):
    """An operation would require descending past the maximum tree depth."""


class OutOfWindowError(ValueError):
    """A world coordinate falls outside the database window."""


class StorageError(Exception):
    """A saved database directory is missing, incomplete, or corrupt."""


class SplError(Exception):
    """Statement-level failure carrying an SQLSTATE and, when known, a source position.

    position is (line, column), 1-based, or None for errors with no useful anchor.
    """

    sqlstate = SQLSTATE_SYNTAX

    def __init__(self, message, position=None, sqlstate=None):
        super().__init__(message)
        self.message = message
        self.position = position
        if sqlstate is not None:
            self.sqlstate = sqlstate

    def __str__(self):
        if self.position is not None:
            line, col = self.position
            return f"{self.message} (line {line}, column {col})"
        return self.message


class LexError(SplError):
    sqlstate = SQLSTATE_SYNTAX


class ParseError(SplError):
    sqlstate = SQLSTATE_SYNTAX

    def __init__(self, message, position=None, expected=None):
        super().__init__(message, position)
        # Expected-token set, for recovery hints and tests.
        self.expected = tuple(expected) if expected else ()


class CatalogError(SplError):
    sqlstate = SQLSTATE_UNDEFINED_TABLE


class ColumnError(SplError):
    sqlstate = SQLSTATE_UNDEFINED_COLUMN


class TypeMismatchError(SplError):
    sqlstate = SQLSTATE_TYPE_MISMATCH


class RoutineError(SplError):
    sqlstate = SQLSTATE_UNDEFINED_ROUTINE


class BindingError(SplError):
    sqlstate = SQLSTATE_UNBOUND_PARAM


class DuplicateTableError(SplError):
    sqlstate = SQLSTATE_DUPLICATE_TABLE


class DuplicateRoutineError(SplError):
    sqlstate = SQLSTATE_DUPLICATE_ROUTINE


class SpatialStateError(SplError):
    """Spatial runtime failure surfaced as an SP0xx statement state."""

    sqlstate = SQLSTATE_CELL_DOMAIN


def spatial_state_for(exc):
    """Map a geometry/quadcode exception to its SP0xx SQLSTATE."""
    if isinstance(exc, DepthOverflowError):
        return SQLSTATE_DEPTH_OVERFLOW
    if isinstance(exc, OutOfWindowError):
        return SQLSTATE_OUT_OF_WINDOW
    return SQLSTATE_CELL_DOMAIN
