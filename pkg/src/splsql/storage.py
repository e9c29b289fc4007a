"""Database persistence: a directory with catalog.json plus one TSV per table.

The catalog holds the window, default level, table schemas and procedure
texts; each relation is a tab-separated file with a header line and rows in
canonical order, so saves diff cleanly. Codes serialize as digit strings
('@' for the root), numbers in shortest round-trip form, Null as an empty
field. Text is backslash-escaped (\\t, \\n, \\r, \\\\) and the empty string
is written as the token '\\e' so it stays distinct from Null.

Every file is written to a temp name and atomically renamed, catalog last,
so a crashed save leaves the previous state loadable.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

from .errors import StorageError
from .executor import define_procedure
from .geometry import WorldTransform
from .parser import parse_statement
from .quadcode import Quadcode
from .relengine import Database, Relation
from .sqlast import Kind

CATALOG_NAME = "catalog.json"
FORMAT_TAG = "splsql-db/1"


def _escape_text(s: str) -> str:
    if s == "":
        return "\\e"
    return (
        s.replace("\\", "\\\\")
        .replace("\t", "\\t")
        .replace("\n", "\\n")
        .replace("\r", "\\r")
    )


def _unescape_text(s: str) -> str:
    if s == "\\e":
        return ""
    out = []
    i = 0
    while i < len(s):
        c = s[i]
        if c == "\\" and i + 1 < len(s):
            nxt = s[i + 1]
            mapped = {"\\": "\\", "t": "\t", "n": "\n", "r": "\r"}.get(nxt)
            if mapped is not None:
                out.append(mapped)
                i += 2
                continue
        out.append(c)
        i += 1
    return "".join(out)


def _field_text(value, kind: Kind) -> str:
    if value is None:
        return ""
    if kind is Kind.TEXT:
        return _escape_text(value)
    if kind is Kind.CODE:
        return value.to_text()
    f = float(value)
    return str(int(f)) if f.is_integer() else repr(f)


def _field_value(text: str, kind: Kind, where: str):
    if text == "":
        return None
    try:
        if kind is Kind.TEXT:
            return _unescape_text(text)
        if kind is Kind.CODE:
            return Quadcode.from_text(text)
        return float(text)
    except ValueError as exc:
        raise StorageError(f"{where}: bad {kind.value} value {text!r}: {exc}") from None


def _atomic_write(path: Path, data: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(data, encoding="utf-8")
    os.replace(tmp, path)


def save_db(db: Database, path) -> None:
    """Write the database directory; rows in canonical order for stable diffs."""
    root = Path(path)
    root.mkdir(parents=True, exist_ok=True)
    for name, rel in sorted(db.tables.items()):
        lines = ["\t".join(rel.column_names)]
        for row in rel.sorted_rows():
            lines.append(
                "\t".join(_field_text(v, k) for v, k in zip(row, rel.kinds))
            )
        _atomic_write(root / f"{name}.tsv", "\n".join(lines) + "\n")
    catalog = {
        "format": FORMAT_TAG,
        "window": list(db.window.window),
        "default_level": db.default_level,
        "tables": {
            name: {"columns": [[col, kind.value] for col, kind in rel.schema]}
            for name, rel in sorted(db.tables.items())
        },
        "procedures": {
            name: proc.text for name, proc in sorted(db.procedures.items())
        },
    }
    _atomic_write(root / CATALOG_NAME, json.dumps(catalog, indent=2) + "\n")
    for stale in root.glob("*.tsv"):
        if stale.stem not in db.tables:
            stale.unlink()


def load_db(path) -> Database:
    """Load a directory produced by save_db; errors name the offending file."""
    root = Path(path)
    catalog_path = root / CATALOG_NAME
    if not catalog_path.is_file():
        raise StorageError(f"missing {catalog_path}")
    try:
        catalog = json.loads(catalog_path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise StorageError(f"corrupt {catalog_path}: {exc}") from None
    try:
        window = WorldTransform(*(float(v) for v in catalog["window"]))
        default_level = int(catalog["default_level"])
        table_defs = catalog["tables"]
    except (KeyError, TypeError, ValueError) as exc:
        raise StorageError(f"corrupt {catalog_path}: {exc}") from None

    tables = {}
    for name, info in table_defs.items():
        try:
            schema = tuple((col, Kind(kind)) for col, kind in info["columns"])
        except (KeyError, TypeError, ValueError) as exc:
            raise StorageError(f"corrupt {catalog_path}: table {name}: {exc}") from None
        tsv_path = root / f"{name}.tsv"
        if not tsv_path.is_file():
            raise StorageError(f"missing {tsv_path}")
        text = tsv_path.read_text(encoding="utf-8")
        if text.endswith("\n"):
            text = text[:-1]
        lines = text.split("\n") if text else []
        if not lines:
            raise StorageError(f"{tsv_path}: missing header line")
        header = tuple(lines[0].split("\t"))
        if header != tuple(col for col, _ in schema):
            raise StorageError(
                f"{tsv_path}: header {header} does not match catalog columns"
            )
        rows = set()
        for lineno, line in enumerate(lines[1:], start=2):
            fields = line.split("\t")
            if len(fields) != len(schema):
                raise StorageError(
                    f"{tsv_path}: line {lineno}: {len(fields)} fields, expected {len(schema)}"
                )
            rows.add(
                tuple(
                    _field_value(f, kind, f"{tsv_path}: line {lineno}")
                    for f, (_, kind) in zip(fields, schema)
                )
            )
        tables[name] = Relation(schema, frozenset(rows))

    db = Database(tables, window, default_level)
    for name, text in catalog.get("procedures", {}).items():
        try:
            stmt = parse_statement(text)
        except Exception as exc:
            raise StorageError(f"{catalog_path}: procedure {name}: {exc}") from None
        db = define_procedure(db, stmt)
    return db
