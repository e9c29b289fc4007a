"""In-memory relations over nominal and cell-code columns, with set semantics.

Rows are plain tuples of str (TEXT), float (NUMBER), Quadcode (CODE) or None
(Null). A relation is a schema plus a frozenset of rows, so duplicates
collapse structurally and every operation is a pure function returning new
values; the Database is an immutable snapshot replaced wholesale on writes.

Null never compares equal to anything in predicates (two-valued: unknown is
false), but rows deduplicate by structural identity, so Null cells do not
multiply rows. Table and column names fold to upper case for resolution.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Mapping, Optional, Sequence, Union

from . import quadcode as qc
from . import sqlast as ast
from .errors import (
    BindingError,
    CatalogError,
    ColumnError,
    DuplicateTableError,
    RoutineError,
    SplError,
    SQLSTATE_DIVISION_BY_ZERO,
    TypeMismatchError,
)
from .geometry import (
    Point,
    Polygon,
    Polyline,
    WorldTransform,
    raster_point,
    raster_polygon,
    raster_polyline,
)
from .quadcode import Quadcode
from .sqlast import Kind

Value = Union[str, float, Quadcode, None]
Row = tuple  # tuple[Value, ...]


def value_kind(v: Value) -> Optional[Kind]:
    """Kind of a runtime value; None for Null. Rejects anything else."""
    if v is None:
        return None
    if isinstance(v, bool):
        return Kind.BOOL
    if isinstance(v, str):
        return Kind.TEXT
    if isinstance(v, (int, float)):
        return Kind.NUMBER
    if isinstance(v, Quadcode):
        return Kind.CODE
    raise TypeError(f"not an engine value: {v!r}")


def format_value(v: Value) -> Optional[str]:
    """Canonical text of a value; None stays None (Null). Codes use '@' for root."""
    if v is None:
        return None
    if isinstance(v, Quadcode):
        return v.to_text()
    if isinstance(v, bool):
        return "TRUE" if v else "FALSE"
    if isinstance(v, (int, float)):
        f = float(v)
        return str(int(f)) if f.is_integer() else repr(f)
    return v


def parse_value(text: Optional[str], kind: Kind) -> Value:
    """Inverse of format_value for a known column kind."""
    if text is None:
        return None
    if kind is Kind.TEXT:
        return text
    if kind is Kind.NUMBER:
        return float(text)
    if kind is Kind.CODE:
        return Quadcode.from_text(text)
    raise ValueError(f"kind {kind} is not storable")


def _sort_key(v: Value):
    if v is None:
        return (0, 0)
    if isinstance(v, Quadcode):
        return (1, v._key)
    if isinstance(v, str):
        return (1, v)
    return (1, float(v))


Schema = tuple  # tuple[tuple[str, Kind], ...]


@dataclass(frozen=True)
class Relation:
    """Named columns over a set of rows."""

    schema: Schema
    rows: frozenset = frozenset()

    @classmethod
    def build(cls, schema: Iterable[tuple[str, Kind]], rows: Iterable[Sequence[Value]] = ()) -> "Relation":
        sch = tuple((name.upper(), kind) for name, kind in schema)
        return cls(sch, frozenset(tuple(r) for r in rows))

    @property
    def column_names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.schema)

    @property
    def kinds(self) -> tuple[Kind, ...]:
        return tuple(kind for _, kind in self.schema)

    def column_index(self, name: str) -> int:
        target = name.upper()
        for i, (col, _) in enumerate(self.schema):
            if col == target:
                return i
        raise ColumnError(f"unknown column {name!r}")

    def sorted_rows(self) -> list[Row]:
        """Rows in canonical order (per-column: Null first, then value order)."""
        return sorted(self.rows, key=lambda r: tuple(_sort_key(v) for v in r))

    def __len__(self) -> int:
        return len(self.rows)


def check_row(schema: Schema, row: Sequence[Value], where: str = "row") -> Row:
    """Validate a row against a schema; Null is allowed in any column."""
    row = tuple(row)
    if len(row) != len(schema):
        raise TypeMismatchError(
            f"{where} has {len(row)} values, table has {len(schema)} columns"
        )
    out = []
    for v, (name, kind) in zip(row, schema):
        vk = value_kind(v)
        if vk is Kind.NUMBER:
            v = float(v)
        if vk is not None and vk is not kind:
            raise TypeMismatchError(
                f"{where}: column {name} expects {kind.value}, got {vk.value}"
            )
        out.append(v)
    return tuple(out)


# --- database ------------------------------------------------------------------

@dataclass(frozen=True)
class Procedure:
    """A stored single-statement procedure: declaration plus canonical text."""

    name: str
    params: tuple  # tuple[ast.ParamDecl, ...]
    body: object  # ast.Query
    text: str


STANDARD_TABLES = {
    "POINTS": (("POINT", Kind.TEXT), ("CODE", Kind.CODE)),
    "LINES": (("LINE", Kind.TEXT), ("CODE", Kind.CODE)),
    "AREAS": (("AREA", Kind.TEXT), ("CODE", Kind.CODE)),
}

KIND_TO_TABLE = {"point": "POINTS", "line": "LINES", "area": "AREAS"}


@dataclass(frozen=True)
class Database:
    """Immutable catalog snapshot; every mutation returns a new snapshot."""

    tables: dict
    window: WorldTransform
    default_level: int
    procedures: dict = field(default_factory=dict)

    @classmethod
    def new(cls, window: WorldTransform = WorldTransform(0.0, 0.0, 1.0, 1.0),
            default_level: int = 6) -> "Database":
        tables = {name: Relation.build(schema) for name, schema in STANDARD_TABLES.items()}
        return cls(tables, window, default_level)

    def table(self, name: str) -> Relation:
        rel = self.tables.get(name.upper())
        if rel is None:
            raise CatalogError(f"unknown table {name!r}")
        return rel

    def has_table(self, name: str) -> bool:
        return name.upper() in self.tables

    def with_table(self, name: str, rel: Relation) -> "Database":
        tables = dict(self.tables)
        tables[name.upper()] = rel
        return replace(self, tables=tables)

    def create_table(self, name: str, schema: Iterable[tuple[str, Kind]]) -> "Database":
        key = name.upper()
        if key in self.tables:
            raise DuplicateTableError(f"table {name!r} already exists")
        sch = tuple((col.upper(), kind) for col, kind in schema)
        if not sch:
            raise SplError(f"table {name!r} needs at least one column")
        seen = set()
        for col, kind in sch:
            if col in seen:
                raise SplError(f"duplicate column {col!r} in table {name!r}")
            if kind not in ast.STORABLE_KINDS:
                raise TypeMismatchError(f"column {col!r}: kind {kind.value} is not storable")
            seen.add(col)
        return self.with_table(key, Relation(sch))

    def insert_rows(self, name: str, rows: Iterable[Sequence[Value]]) -> tuple["Database", int]:
        rel = self.table(name)
        checked = [
            check_row(rel.schema, row, where=f"row {i + 1}")
            for i, row in enumerate(rows)
        ]
        merged = rel.rows | frozenset(checked)
        added = len(merged) - len(rel.rows)
        return self.with_table(name, replace(rel, rows=merged)), added

    def store_entity(self, kind: str, name: str, geometry, level: Optional[int] = None) -> tuple["Database", int]:
        """Rasterize and store a named entity, replacing any prior rows of that name.

        Returns the new snapshot and the number of code rows written (an area
        that rasterizes to nothing stores zero rows).
        """
        table = KIND_TO_TABLE.get(kind)
        if table is None:
            raise SplError(f"unknown entity kind {kind!r}")
        if level is None:
            level = self.default_level
        if kind == "point":
            if not isinstance(geometry, Point):
                raise SplError("point entities take a Point geometry")
            cover = raster_point(self.window, geometry, level)
        elif kind == "line":
            if not isinstance(geometry, Polyline):
                raise SplError("line entities take a Polyline geometry")
            cover = raster_polyline(self.window, geometry, level, condense=False)
        else:
            if not isinstance(geometry, Polygon):
                raise SplError("area entities take a Polygon geometry")
            cover = raster_polygon(self.window, geometry, level)
        rel = self.table(table)
        kept = frozenset(r for r in rel.rows if r[0] != name)
        rows = kept | frozenset((name, code) for code in cover)
        return self.with_table(table, replace(rel, rows=rows)), len(cover)

    def delete_entity(self, table: str, name: str) -> tuple["Database", int]:
        rel = self.table(table)
        kept = frozenset(r for r in rel.rows if r[0] != name)
        removed = len(rel.rows) - len(kept)
        return self.with_table(table, replace(rel, rows=kept)), removed

    def entity_codes(self, table: str, name: str) -> list[Quadcode]:
        rel = self.table(table)
        idx = rel.column_index("CODE")
        codes = [r[idx] for r in rel.rows if r[0] == name and r[idx] is not None]
        codes.sort(key=lambda c: c._key)
        return codes

    def with_procedure(self, proc: Procedure) -> "Database":
        procs = dict(self.procedures)
        procs[proc.name.upper()] = proc
        return replace(self, procedures=procs)


# --- relational algebra ---------------------------------------------------------

def select(rel: Relation, predicate: Optional[ast.Expr],
           projection: Optional[Sequence[str]],
           bindings: Optional[Mapping[str, Value]] = None) -> Relation:
    """Filter by predicate, then project (duplicates collapse after projection)."""
    if predicate is None:
        kept = rel.rows
    else:
        names = rel.column_names
        kept = set()
        for row in rel.rows:
            ctx = dict(zip(names, row))
            res = eval_scalar(predicate, ctx, bindings)
            if res is True:
                kept.add(row)
            elif res is not False and res is not None:
                raise TypeMismatchError("WHERE must be a condition")
    if projection is None:
        return replace(rel, rows=frozenset(kept))
    idx = [rel.column_index(name) for name in projection]
    schema = tuple(rel.schema[i] for i in idx)
    rows = frozenset(tuple(row[i] for i in idx) for row in kept)
    return Relation(schema, rows)


def combine_schemas(s1: Schema, s2: Schema) -> Schema:
    """Concatenate schemas; colliding column names gain _2, _3, ... suffixes."""
    used = {name for name, _ in s1}
    schema = list(s1)
    for name, kind in s2:
        fresh = name
        bump = 2
        while fresh in used:
            fresh = f"{name}_{bump}"
            bump += 1
        used.add(fresh)
        schema.append((fresh, kind))
    return tuple(schema)


def cross_product(r1: Relation, r2: Relation) -> Relation:
    """All row concatenations; colliding column names are positionally renamed."""
    schema = combine_schemas(r1.schema, r2.schema)
    rows = frozenset(a + b for a in r1.rows for b in r2.rows)
    return Relation(schema, rows)


def _check_compatible(r1: Relation, r2: Relation, op: str) -> None:
    if len(r1.schema) != len(r2.schema) or r1.kinds != r2.kinds:
        raise TypeMismatchError(
            f"{op} operands have incompatible schemas: "
            f"({', '.join(k.value for k in r1.kinds)}) vs "
            f"({', '.join(k.value for k in r2.kinds)})"
        )


def rel_union(r1: Relation, r2: Relation) -> Relation:
    _check_compatible(r1, r2, "UNION")
    return replace(r1, rows=r1.rows | r2.rows)


def rel_intersect(r1: Relation, r2: Relation) -> Relation:
    _check_compatible(r1, r2, "INTERSECT")
    return replace(r1, rows=r1.rows & r2.rows)


def rel_minus(r1: Relation, r2: Relation) -> Relation:
    _check_compatible(r1, r2, "MINUS")
    return replace(r1, rows=r1.rows - r2.rows)


def lines_through_point(db: Database, point_name: str) -> Relation:
    """Line names whose code set contains every code of the named point.

    This is the relational-division plan: with an empty divisor (no codes
    stored under the name) every line qualifies vacuously, exactly like the
    nested cross-product/MINUS query it mirrors.
    """
    points = db.table("POINTS")
    pidx = points.column_index("CODE")
    divisor = {r[pidx] for r in points.rows if r[0] == point_name}
    lines = db.table("LINES")
    names = {r[0] for r in lines.rows}
    pairs = set(lines.rows)
    kept = {nm for nm in names if all((nm, c) in pairs for c in divisor)}
    return Relation((("LINE", Kind.TEXT),), frozenset((nm,) for nm in kept))


# --- scalar expressions ----------------------------------------------------------

@dataclass(frozen=True)
class QtFunction:
    name: str
    arg_kinds: tuple[Kind, ...]
    result: Kind
    impl: Callable


def _qt_neighbor(code: Quadcode, direction: str) -> Optional[Quadcode]:
    return qc.neighbor(code, qc.Direction.parse(direction))


QT_FUNCTIONS = {
    f.name: f
    for f in (
        QtFunction("QT_CONTAINS", (Kind.CODE, Kind.CODE), Kind.BOOL, qc.contains),
        QtFunction("QT_COMMON", (Kind.CODE, Kind.CODE), Kind.CODE, qc.common),
        QtFunction("QT_ADJACENT", (Kind.CODE, Kind.CODE), Kind.BOOL, qc.adjacent),
        QtFunction("QT_NEIGHBOR", (Kind.CODE, Kind.TEXT), Kind.CODE, _qt_neighbor),
        QtFunction("QT_PARENT", (Kind.CODE,), Kind.CODE, qc.parent_of),
        QtFunction("QT_LEVEL", (Kind.CODE,), Kind.NUMBER, lambda c: float(c.level)),
        QtFunction("QT_CELLAREA", (Kind.CODE,), Kind.NUMBER, lambda c: 0.25 ** c.level),
        QtFunction("QT_DIST", (Kind.CODE, Kind.CODE), Kind.NUMBER, qc.dist),
    )
}

_ORDERED_KINDS = (Kind.TEXT, Kind.NUMBER)


def eval_scalar(expr: ast.Expr, ctx: Mapping[str, Value],
                bindings: Optional[Mapping[str, Value]] = None) -> Value:
    """Evaluate an expression over one row context.

    Any comparison involving Null is false; a Null argument makes a QT_*
    function return Null. Logic is two-valued: Null collapses to false.
    """
    if isinstance(expr, ast.Literal):
        return expr.value
    if isinstance(expr, ast.Column):
        name = expr.name.upper()
        if name not in ctx:
            raise ColumnError(f"unknown column {expr.name!r}", expr.span)
        return ctx[name]
    if isinstance(expr, ast.Param):
        if bindings is None:
            raise BindingError(f"no binding for :{expr.name}", expr.span)
        key = expr.name.upper()
        table = {k.upper(): v for k, v in bindings.items()}
        if key not in table:
            raise BindingError(f"no binding for :{expr.name}", expr.span)
        return table[key]
    if isinstance(expr, ast.Compare):
        lv = eval_scalar(expr.left, ctx, bindings)
        rv = eval_scalar(expr.right, ctx, bindings)
        if lv is None or rv is None:
            return False
        lk, rk = value_kind(lv), value_kind(rv)
        if lk is not rk:
            raise TypeMismatchError(
                f"cannot compare {lk.value} with {rk.value}", expr.span
            )
        if expr.op == "=":
            return lv == rv
        if expr.op == "<>":
            return lv != rv
        if lk not in _ORDERED_KINDS:
            raise TypeMismatchError(
                f"ordering comparison needs TEXT or NUMBER, got {lk.value}", expr.span
            )
        if expr.op == "<":
            return lv < rv
        if expr.op == "<=":
            return lv <= rv
        if expr.op == ">":
            return lv > rv
        return lv >= rv
    if isinstance(expr, ast.BinLogic):
        lv = _as_bool(eval_scalar(expr.left, ctx, bindings), expr)
        if expr.op == "AND":
            if not lv:
                return False
            return _as_bool(eval_scalar(expr.right, ctx, bindings), expr)
        if lv:
            return True
        return _as_bool(eval_scalar(expr.right, ctx, bindings), expr)
    if isinstance(expr, ast.Not):
        return not _as_bool(eval_scalar(expr.operand, ctx, bindings), expr)
    if isinstance(expr, ast.Arith):
        lv = eval_scalar(expr.left, ctx, bindings)
        rv = eval_scalar(expr.right, ctx, bindings)
        if lv is None or rv is None:
            return None
        for side, v in (("left", lv), ("right", rv)):
            if value_kind(v) is not Kind.NUMBER:
                raise TypeMismatchError(
                    f"arithmetic needs NUMBER on the {side}, got {value_kind(v).value}",
                    expr.span,
                )
        if expr.op == "+":
            return float(lv) + float(rv)
        if expr.op == "-":
            return float(lv) - float(rv)
        if expr.op == "*":
            return float(lv) * float(rv)
        if float(rv) == 0.0:
            raise SplError("division by zero", expr.span, SQLSTATE_DIVISION_BY_ZERO)
        return float(lv) / float(rv)
    if isinstance(expr, ast.Neg):
        v = eval_scalar(expr.operand, ctx, bindings)
        if v is None:
            return None
        if value_kind(v) is not Kind.NUMBER:
            raise TypeMismatchError("unary minus needs NUMBER", expr.span)
        return -float(v)
    if isinstance(expr, ast.Func):
        fn = QT_FUNCTIONS.get(expr.name.upper())
        if fn is None:
            raise RoutineError(f"unknown function {expr.name}", expr.span)
        if len(expr.args) != len(fn.arg_kinds):
            raise RoutineError(
                f"{fn.name} takes {len(fn.arg_kinds)} arguments, got {len(expr.args)}",
                expr.span,
            )
        values = []
        for i, (arg, want) in enumerate(zip(expr.args, fn.arg_kinds), start=1):
            v = eval_scalar(arg, ctx, bindings)
            if v is None:
                return None
            got = value_kind(v)
            if got is not want:
                raise TypeMismatchError(
                    f"{fn.name} argument {i} expects {want.value}, got {got.value}",
                    expr.span,
                )
            values.append(v)
        return fn.impl(*values)
    raise TypeError(f"not an expression node: {expr!r}")


def _as_bool(v: Value, expr: ast.Expr) -> bool:
    if v is None:
        return False
    if isinstance(v, bool):
        return v
    raise TypeMismatchError("logic operand must be a condition", expr.span)
