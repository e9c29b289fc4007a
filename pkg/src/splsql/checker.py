"""Static validation of parsed statements against a database catalog.

Resolves table and column references, types every expression, and verifies
set-operation compatibility (positional kinds; column names may differ) and
QT-function arity and argument kinds. Host parameters type as unknown: the
engine re-checks their kinds where the bound values are used.
"""

from __future__ import annotations

from typing import Optional

from . import sqlast as ast
from .errors import (
    BindingError,
    CatalogError,
    ColumnError,
    DuplicateRoutineError,
    DuplicateTableError,
    RoutineError,
    TypeMismatchError,
)
from .relengine import QT_FUNCTIONS, Database, Schema, combine_schemas
from .sqlast import Kind

_ORDERED_KINDS = (Kind.TEXT, Kind.NUMBER)


def check_statement(stmt: ast.Statement, db: Database) -> Optional[Schema]:
    """Validate one statement; returns the output schema for queries."""
    if isinstance(stmt, (ast.Select, ast.SetOp)):
        return check_query(stmt, db, params=None)
    if isinstance(stmt, ast.CreateTable):
        if db.has_table(stmt.name):
            raise DuplicateTableError(f"table {stmt.name!r} already exists", stmt.span)
        seen = set()
        for col in stmt.columns:
            key = col.name.upper()
            if key in seen:
                raise ColumnError(f"duplicate column {col.name!r}", col.span)
            seen.add(key)
        return None
    if isinstance(stmt, ast.Insert):
        rel = _require_table(db, stmt.table, stmt.span)
        for i, row in enumerate(stmt.rows, start=1):
            if len(row) != len(rel.schema):
                raise TypeMismatchError(
                    f"row {i} has {len(row)} values, table has {len(rel.schema)} columns",
                    stmt.span,
                )
            for lit, (name, kind) in zip(row, rel.schema):
                if lit.kind is not None and lit.kind is not kind:
                    raise TypeMismatchError(
                        f"row {i}: column {name} expects {kind.value}, got {lit.kind.value}",
                        lit.span,
                    )
        return None
    if isinstance(stmt, ast.ProcedureDecl):
        if stmt.name.upper() in db.procedures:
            raise DuplicateRoutineError(
                f"procedure {stmt.name!r} already defined", stmt.span
            )
        declared = {p.name.upper() for p in stmt.params}
        if len(declared) != len(stmt.params):
            raise BindingError("duplicate parameter name in procedure header", stmt.span)
        check_query(stmt.body, db, params=declared)
        return None
    if isinstance(stmt, ast.Call):
        proc = db.procedures.get(stmt.name.upper())
        if proc is None:
            raise RoutineError(f"unknown procedure {stmt.name}", stmt.span)
        if len(stmt.args) != len(proc.params):
            raise RoutineError(
                f"procedure {proc.name} takes {len(proc.params)} arguments, "
                f"got {len(stmt.args)}",
                stmt.span,
            )
        return None
    raise TypeError(f"not a statement node: {stmt!r}")


def _require_table(db: Database, name: str, span):
    try:
        return db.table(name)
    except CatalogError as exc:
        raise CatalogError(exc.message, span) from None


def check_query(query: ast.Query, db: Database, params: Optional[set] = None) -> Schema:
    """Resolve and type a query; returns its output schema."""
    if isinstance(query, ast.Select):
        combined: Schema = ()
        for item in query.from_items:
            if isinstance(item, ast.TableRef):
                schema = _require_table(db, item.name, item.span).schema
            else:
                schema = check_query(item.query, db, params)
            combined = combine_schemas(combined, schema) if combined else schema
        if query.where is not None:
            colmap = {name: kind for name, kind in combined}
            kind = _type_expr(query.where, colmap, params)
            if kind is not None and kind is not Kind.BOOL:
                raise TypeMismatchError(
                    f"WHERE must be a condition, not {kind.value}",
                    query.where.span,
                )
        if query.projection is None:
            return combined
        out = []
        names = {name: (name, kind) for name, kind in combined}
        for col in query.projection:
            hit = names.get(col.upper())
            if hit is None:
                raise ColumnError(f"unknown column {col!r}", query.span)
            out.append(hit)
        return tuple(out)
    if isinstance(query, ast.SetOp):
        left = check_query(query.left, db, params)
        right = check_query(query.right, db, params)
        lk = tuple(kind for _, kind in left)
        rk = tuple(kind for _, kind in right)
        if lk != rk:
            raise TypeMismatchError(
                f"{query.op} operands have incompatible schemas: "
                f"({', '.join(k.value for k in lk)}) vs ({', '.join(k.value for k in rk)})",
                query.span,
            )
        return left
    raise TypeError(f"not a query node: {query!r}")


def _type_expr(expr: ast.Expr, colmap: dict, params: Optional[set]) -> Optional[Kind]:
    """Kind of an expression, or None when host parameters leave it open."""
    if isinstance(expr, ast.Literal):
        return expr.kind
    if isinstance(expr, ast.Column):
        kind = colmap.get(expr.name.upper())
        if kind is None:
            raise ColumnError(f"unknown column {expr.name!r}", expr.span)
        return kind
    if isinstance(expr, ast.Param):
        if params is not None and expr.name.upper() not in params:
            raise BindingError(
                f"undeclared parameter :{expr.name}", expr.span
            )
        return None
    if isinstance(expr, ast.Compare):
        lk = _type_expr(expr.left, colmap, params)
        rk = _type_expr(expr.right, colmap, params)
        if lk is Kind.BOOL or rk is Kind.BOOL:
            raise TypeMismatchError("cannot compare conditions", expr.span)
        if lk is not None and rk is not None and lk is not rk:
            raise TypeMismatchError(
                f"cannot compare {lk.value} with {rk.value}", expr.span
            )
        if expr.op not in ("=", "<>"):
            for k in (lk, rk):
                if k is not None and k not in _ORDERED_KINDS:
                    raise TypeMismatchError(
                        f"ordering comparison needs TEXT or NUMBER, got {k.value}",
                        expr.span,
                    )
        return Kind.BOOL
    if isinstance(expr, ast.BinLogic):
        for side in (expr.left, expr.right):
            kind = _type_expr(side, colmap, params)
            if kind is not None and kind is not Kind.BOOL:
                raise TypeMismatchError(
                    f"{expr.op} operand must be a condition, not {kind.value}",
                    side.span,
                )
        return Kind.BOOL
    if isinstance(expr, ast.Not):
        kind = _type_expr(expr.operand, colmap, params)
        if kind is not None and kind is not Kind.BOOL:
            raise TypeMismatchError(
                f"NOT operand must be a condition, not {kind.value}", expr.span
            )
        return Kind.BOOL
    if isinstance(expr, (ast.Arith, ast.Neg)):
        operands = (expr.left, expr.right) if isinstance(expr, ast.Arith) else (expr.operand,)
        for side in operands:
            kind = _type_expr(side, colmap, params)
            if kind is not None and kind is not Kind.NUMBER:
                raise TypeMismatchError(
                    f"arithmetic needs NUMBER, got {kind.value}", side.span
                )
        return Kind.NUMBER
    if isinstance(expr, ast.Func):
        fn = QT_FUNCTIONS.get(expr.name.upper())
        if fn is None:
            raise RoutineError(f"unknown function {expr.name}", expr.span)
        if len(expr.args) != len(fn.arg_kinds):
            raise RoutineError(
                f"{fn.name} takes {len(fn.arg_kinds)} arguments, got {len(expr.args)}",
                expr.span,
            )
        for i, (arg, want) in enumerate(zip(expr.args, fn.arg_kinds), start=1):
            got = _type_expr(arg, colmap, params)
            if got is not None and got is not want:
                raise TypeMismatchError(
                    f"{fn.name} argument {i} expects {want.value}, got {got.value}",
                    arg.span,
                )
        return fn.result
    raise TypeError(f"not an expression node: {expr!r}")
