"""Statement and expression trees for the SPL/SQL dialect.

Every node carries the source position where it started (1-based line and
column) in a field excluded from equality, so two parses of equivalent text
compare equal regardless of layout. Value kinds inferred by the checker are
stashed the same way.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Union

from .quadcode import Quadcode

Span = tuple[int, int]


class Kind(Enum):
    """Value kinds of the engine; BOOL exists only inside expressions."""

    TEXT = "TEXT"
    NUMBER = "NUMBER"
    CODE = "CODE"
    BOOL = "BOOL"


STORABLE_KINDS = (Kind.TEXT, Kind.NUMBER, Kind.CODE)


def _span_field():
    return field(default=None, compare=False, repr=False)


# --- expressions ---------------------------------------------------------------

@dataclass
class Literal:
    value: Union[str, float, Quadcode, None]
    kind: Optional[Kind]  # None for the NULL literal
    span: Optional[Span] = _span_field()


@dataclass
class Column:
    name: str
    span: Optional[Span] = _span_field()


@dataclass
class Param:
    name: str
    span: Optional[Span] = _span_field()


@dataclass
class Compare:
    op: str  # = <> < <= > >=
    left: "Expr"
    right: "Expr"
    span: Optional[Span] = _span_field()


@dataclass
class BinLogic:
    op: str  # AND OR
    left: "Expr"
    right: "Expr"
    span: Optional[Span] = _span_field()


@dataclass
class Not:
    operand: "Expr"
    span: Optional[Span] = _span_field()


@dataclass
class Arith:
    op: str  # + - * /
    left: "Expr"
    right: "Expr"
    span: Optional[Span] = _span_field()


@dataclass
class Neg:
    operand: "Expr"
    span: Optional[Span] = _span_field()


@dataclass
class Func:
    name: str  # upper-cased QT_* name
    args: tuple["Expr", ...]
    span: Optional[Span] = _span_field()


Expr = Union[Literal, Column, Param, Compare, BinLogic, Not, Arith, Neg, Func]


# --- queries -------------------------------------------------------------------

@dataclass
class TableRef:
    name: str
    span: Optional[Span] = _span_field()


@dataclass
class SubqueryRef:
    query: "Query"
    span: Optional[Span] = _span_field()


FromItem = Union[TableRef, SubqueryRef]


@dataclass
class Select:
    projection: Optional[tuple[str, ...]]  # None means *
    from_items: tuple[FromItem, ...]
    where: Optional[Expr] = None
    span: Optional[Span] = _span_field()


@dataclass
class SetOp:
    op: str  # UNION MINUS INTERSECT
    left: "Query"
    right: "Query"
    span: Optional[Span] = _span_field()


Query = Union[Select, SetOp]


# --- statements ----------------------------------------------------------------

@dataclass
class ColumnDef:
    name: str
    kind: Kind
    span: Optional[Span] = _span_field()


@dataclass
class CreateTable:
    name: str
    columns: tuple[ColumnDef, ...]
    span: Optional[Span] = _span_field()


@dataclass
class Insert:
    table: str
    rows: tuple[tuple[Literal, ...], ...]
    span: Optional[Span] = _span_field()


@dataclass
class ParamDecl:
    name: str  # without the leading colon
    type_name: str  # CHAR or CODE
    char_len: Optional[int] = None
    span: Optional[Span] = _span_field()


@dataclass
class ProcedureDecl:
    name: str
    params: tuple[ParamDecl, ...]
    body: Query
    span: Optional[Span] = _span_field()


@dataclass
class Call:
    name: str
    args: tuple[Literal, ...]
    span: Optional[Span] = _span_field()


Statement = Union[Select, SetOp, CreateTable, Insert, ProcedureDecl, Call]
