"""Canonical text form of SPL/SQL statements.

Printing normalizes layout (upper-case keywords, single spaces, minimal
parentheses) while preserving identifier spelling, so parse(print(parse(t)))
equals parse(t) for every valid t and printing is a fixpoint of its own
output.
"""

from __future__ import annotations

from . import sqlast as ast
from .quadcode import Quadcode

_SETOP_PREC = {"UNION": 1, "MINUS": 1, "INTERSECT": 2}

_EXPR_PREC = {
    "OR": 1,
    "AND": 2,
    "NOT": 3,
    "CMP": 4,
    "+": 5,
    "-": 5,
    "*": 6,
    "/": 6,
    "NEG": 7,
    "ATOM": 8,
}


def _literal_text(value, kind) -> str:
    if value is None:
        return "NULL"
    if isinstance(value, Quadcode):
        return f"Q'{value}'"
    if isinstance(value, str):
        escaped = value.replace("'", "''")
        return f"'{escaped}'"
    f = float(value)
    return str(int(f)) if f.is_integer() else repr(f)


def _expr_prec(expr: ast.Expr) -> int:
    if isinstance(expr, ast.BinLogic):
        return _EXPR_PREC[expr.op]
    if isinstance(expr, ast.Not):
        return _EXPR_PREC["NOT"]
    if isinstance(expr, ast.Compare):
        return _EXPR_PREC["CMP"]
    if isinstance(expr, ast.Arith):
        return _EXPR_PREC[expr.op]
    if isinstance(expr, ast.Neg):
        return _EXPR_PREC["NEG"]
    return _EXPR_PREC["ATOM"]


def print_expr(expr: ast.Expr, context: int = 0) -> str:
    prec = _expr_prec(expr)
    if isinstance(expr, ast.Literal):
        text = _literal_text(expr.value, expr.kind)
    elif isinstance(expr, ast.Column):
        text = expr.name
    elif isinstance(expr, ast.Param):
        text = f":{expr.name}"
    elif isinstance(expr, ast.Compare):
        text = f"{print_expr(expr.left, prec)} {expr.op} {print_expr(expr.right, prec + 1)}"
    elif isinstance(expr, ast.BinLogic):
        text = f"{print_expr(expr.left, prec)} {expr.op} {print_expr(expr.right, prec + 1)}"
    elif isinstance(expr, ast.Not):
        text = f"NOT {print_expr(expr.operand, prec)}"
    elif isinstance(expr, ast.Arith):
        text = f"{print_expr(expr.left, prec)} {expr.op} {print_expr(expr.right, prec + 1)}"
    elif isinstance(expr, ast.Neg):
        text = f"-{print_expr(expr.operand, prec)}"
    elif isinstance(expr, ast.Func):
        args = ", ".join(print_expr(a) for a in expr.args)
        text = f"{expr.name}({args})"
    else:
        raise TypeError(f"not an expression node: {expr!r}")
    if prec < context:
        return f"({text})"
    return text


def print_query(query: ast.Query, context: int = 0) -> str:
    if isinstance(query, ast.Select):
        if query.projection is None:
            cols = "*"
        else:
            cols = ", ".join(query.projection)
        items = []
        for item in query.from_items:
            if isinstance(item, ast.TableRef):
                items.append(item.name)
            else:
                items.append(f"({print_query(item.query)})")
        text = f"SELECT {cols} FROM {', '.join(items)}"
        if query.where is not None:
            text += f" WHERE {print_expr(query.where)}"
        return text
    if isinstance(query, ast.SetOp):
        prec = _SETOP_PREC[query.op]
        left = print_query(query.left, prec)
        right = print_query(query.right, prec + 1)
        text = f"{left} {query.op} {right}"
        if prec < context:
            return f"({text})"
        return text
    raise TypeError(f"not a query node: {query!r}")


def _param_text(p: ast.ParamDecl) -> str:
    if p.type_name == "CHAR":
        return f":{p.name} CHAR({p.char_len})"
    return f":{p.name} CODE"


def print_statement(stmt: ast.Statement) -> str:
    """Canonical single statement, without a trailing ';'."""
    if isinstance(stmt, (ast.Select, ast.SetOp)):
        return print_query(stmt)
    if isinstance(stmt, ast.CreateTable):
        cols = ", ".join(f"{c.name} {c.kind.value}" for c in stmt.columns)
        return f"CREATE TABLE {stmt.name} ({cols})"
    if isinstance(stmt, ast.Insert):
        rows = ", ".join(
            "(" + ", ".join(_literal_text(v.value, v.kind) for v in row) + ")"
            for row in stmt.rows
        )
        return f"INSERT INTO {stmt.table} VALUES {rows}"
    if isinstance(stmt, ast.ProcedureDecl):
        params = "".join(f", {_param_text(p)}" for p in stmt.params)
        header = f"PROCEDURE {stmt.name} (SQLSTATE{params});"
        return f"{header}\n{print_query(stmt.body)}"
    if isinstance(stmt, ast.Call):
        args = ", ".join(_literal_text(v.value, v.kind) for v in stmt.args)
        return f"CALL {stmt.name}({args})"
    raise TypeError(f"not a statement node: {stmt!r}")


def print_script(statements) -> str:
    return ";\n".join(print_statement(s) for s in statements) + ";\n"
