"""Statement execution: queries to relations, DDL/DML to new snapshots.

Every execution yields a five-character status: '00000' success, '02000'
query with an empty result, '42xxx' for syntax/semantic failures and
'SP0xx' for spatial runtime failures (the run_sql wrapper folds raised
errors into that status instead of propagating them).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional, Union

from . import sqlast as ast
from .checker import check_statement
from .errors import (
    BindingError,
    CellRangeError,
    OutOfWindowError,
    RoutineError,
    SplError,
    SQLSTATE_EMPTY,
    SQLSTATE_OK,
    spatial_state_for,
)
from .parser import parse_statement
from .printer import print_statement
from .relengine import (
    Database,
    Procedure,
    Relation,
    Value,
    cross_product,
    rel_intersect,
    rel_minus,
    rel_union,
    select,
)


@dataclass(frozen=True)
class ExecResult:
    """Outcome of one successfully executed statement."""

    result: Union[Relation, int]
    sqlstate: str
    db: Database


def _walk_params(node, out: set) -> None:
    if isinstance(node, ast.Param):
        out.add(node.name)
    elif isinstance(node, ast.Select):
        for item in node.from_items:
            if isinstance(item, ast.SubqueryRef):
                _walk_params(item.query, out)
        if node.where is not None:
            _walk_params(node.where, out)
    elif isinstance(node, ast.SetOp):
        _walk_params(node.left, out)
        _walk_params(node.right, out)
    elif isinstance(node, (ast.Compare, ast.BinLogic, ast.Arith)):
        _walk_params(node.left, out)
        _walk_params(node.right, out)
    elif isinstance(node, (ast.Not, ast.Neg)):
        _walk_params(node.operand, out)
    elif isinstance(node, ast.Func):
        for arg in node.args:
            _walk_params(arg, out)


def _require_bindings(query: ast.Query, bindings) -> None:
    """Every host parameter must be bound before any row is scanned."""
    needed: set = set()
    _walk_params(query, needed)
    if not needed:
        return
    have = {k.upper() for k in bindings} if bindings else set()
    for name in sorted(needed):
        if name.upper() not in have:
            raise BindingError(f"no binding for :{name}")


def eval_query(query: ast.Query, db: Database,
               bindings: Optional[Mapping[str, Value]] = None) -> Relation:
    if isinstance(query, ast.Select):
        current: Optional[Relation] = None
        for item in query.from_items:
            if isinstance(item, ast.TableRef):
                rel = db.table(item.name)
            else:
                rel = eval_query(item.query, db, bindings)
            current = rel if current is None else cross_product(current, rel)
        assert current is not None
        return select(current, query.where, query.projection, bindings)
    if isinstance(query, ast.SetOp):
        left = eval_query(query.left, db, bindings)
        right = eval_query(query.right, db, bindings)
        if query.op == "UNION":
            return rel_union(left, right)
        if query.op == "INTERSECT":
            return rel_intersect(left, right)
        return rel_minus(left, right)
    raise TypeError(f"not a query node: {query!r}")


def execute(stmt: ast.Statement, db: Database,
            bindings: Optional[Mapping[str, Value]] = None) -> ExecResult:
    """Run one checked statement. Queries return relations, DDL/DML counts."""
    if isinstance(stmt, (ast.Select, ast.SetOp)):
        _require_bindings(stmt, bindings)
        rel = eval_query(stmt, db, bindings)
        state = SQLSTATE_EMPTY if len(rel) == 0 else SQLSTATE_OK
        return ExecResult(rel, state, db)
    if isinstance(stmt, ast.CreateTable):
        db2 = db.create_table(stmt.name, [(c.name, c.kind) for c in stmt.columns])
        return ExecResult(0, SQLSTATE_OK, db2)
    if isinstance(stmt, ast.Insert):
        rows = [tuple(lit.value for lit in row) for row in stmt.rows]
        db2, added = db.insert_rows(stmt.table, rows)
        return ExecResult(added, SQLSTATE_OK, db2)
    if isinstance(stmt, ast.ProcedureDecl):
        db2 = define_procedure(db, stmt)
        return ExecResult(0, SQLSTATE_OK, db2)
    if isinstance(stmt, ast.Call):
        result, state = call_procedure(db, stmt.name, [lit.value for lit in stmt.args])
        return ExecResult(result, state, db)
    raise TypeError(f"not a statement node: {stmt!r}")


def define_procedure(db: Database, decl: ast.ProcedureDecl) -> Database:
    """Register a procedure declaration (its body was checked with the decl)."""
    proc = Procedure(
        name=decl.name.upper(),
        params=decl.params,
        body=decl.body,
        text=print_statement(decl),
    )
    return db.with_procedure(proc)


def call_procedure(db: Database, name: str, args) -> tuple[Relation, str]:
    """Bind positional arguments to the declared parameters and run the body.

    SQLSTATE is an implicit output, never passed as an argument.
    """
    proc = db.procedures.get(name.upper())
    if proc is None:
        raise RoutineError(f"unknown procedure {name}")
    if len(args) != len(proc.params):
        raise RoutineError(
            f"procedure {proc.name} takes {len(proc.params)} arguments, got {len(args)}"
        )
    bindings = {p.name.upper(): v for p, v in zip(proc.params, args)}
    rel = eval_query(proc.body, db, bindings)
    state = SQLSTATE_EMPTY if len(rel) == 0 else SQLSTATE_OK
    return rel, state


@dataclass(frozen=True)
class StatementOutcome:
    """Result of running one statement through the full pipeline, never raising."""

    result: Union[Relation, int, None]
    sqlstate: str
    db: Database
    message: Optional[str] = None
    position: Optional[tuple[int, int]] = None

    @property
    def ok(self) -> bool:
        return self.sqlstate in (SQLSTATE_OK, SQLSTATE_EMPTY)


def run_statement(db: Database, stmt: ast.Statement,
                  bindings: Optional[Mapping[str, Value]] = None) -> StatementOutcome:
    """Check and execute a parsed statement, folding failures into the status."""
    try:
        check_statement(stmt, db)
        out = execute(stmt, db, bindings)
        return StatementOutcome(out.result, out.sqlstate, out.db)
    except SplError as exc:
        return StatementOutcome(None, exc.sqlstate, db, exc.message, exc.position)
    except (CellRangeError, OutOfWindowError) as exc:
        return StatementOutcome(None, spatial_state_for(exc), db, str(exc))


def run_sql(db: Database, text: str,
            bindings: Optional[Mapping[str, Value]] = None) -> StatementOutcome:
    """Tokenize, parse, check and execute one statement of SQL text."""
    try:
        stmt = parse_statement(text)
    except SplError as exc:
        return StatementOutcome(None, exc.sqlstate, db, exc.message, exc.position)
    return run_statement(db, stmt, bindings)
