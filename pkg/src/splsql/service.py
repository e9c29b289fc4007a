"""HTTP face of the engine: query, encode and entity endpoints over JSON.

One database per service. Reads run against the current immutable snapshot
and never block; mutating statements serialize through a single writer lock
and are persisted to disk before the response is sent, so a completed
response is always visible to a fresh load.

Endpoints:
    POST   /query                          {sql, bindings?} -> {columns, kinds, rows, sqlstate}
    POST   /entities                       {kind, name, coords, holes?, level?} -> {stored_codes}
    POST   /encode                         same body, stateless preview -> {codes, rects}
    GET    /entities/{table}/{name}/cells  -> {codes, rects}
    DELETE /entities/{table}/{name}        -> {removed_rows}
    GET    /tables                         -> {tables: [{name, columns, rows}]}

Binding values: JSON string -> TEXT, number -> NUMBER, null -> Null, and
{"code": "digits"} -> CODE. Errors come back as {sqlstate, message,
position?} with HTTP 400 (bad statement/body), 404 (missing resource) or
500 (internal).
"""

from __future__ import annotations

import json
import mimetypes
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Optional

from . import sqlast as ast
from .errors import (
    CellRangeError,
    OutOfWindowError,
    SplError,
    SQLSTATE_CELL_DOMAIN,
    SQLSTATE_SYNTAX,
    spatial_state_for,
)
from .executor import run_statement
from .geometry import (
    Point,
    Polygon,
    Polyline,
    raster_point,
    raster_polygon,
    raster_polyline,
)
from .parser import parse_statement
from .quadcode import Quadcode, cell_rect
from .relengine import Database, format_value
from .storage import load_db, save_db

_MUTATING = (ast.CreateTable, ast.Insert, ast.ProcedureDecl)


class _RequestError(Exception):
    def __init__(self, status: int, message: str, sqlstate: str = SQLSTATE_SYNTAX,
                 position=None):
        super().__init__(message)
        self.status = status
        self.message = message
        self.sqlstate = sqlstate
        self.position = position


class AppState:
    """Shared service state: current snapshot, its path, and the writer lock."""

    def __init__(self, db: Database, db_path, web_root: Optional[Path] = None):
        self.db = db
        self.db_path = db_path
        self.web_root = web_root
        self.write_lock = threading.Lock()

    def commit(self, db: Database) -> None:
        save_db(db, self.db_path)
        self.db = db


def _decode_binding(value):
    if value is None or isinstance(value, str):
        return value
    if isinstance(value, bool):
        raise _RequestError(400, "boolean bindings are not supported")
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, dict) and set(value) == {"code"}:
        try:
            return Quadcode.from_text(value["code"])
        except (CellRangeError, TypeError) as exc:
            raise _RequestError(400, f"bad code binding: {exc}") from None
    raise _RequestError(400, f"unsupported binding value: {value!r}")


def _geometry_from_body(body: dict):
    try:
        kind = body["kind"]
        name = body["name"]
        coords = [Point(float(x), float(y)) for x, y in body["coords"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise _RequestError(400, f"bad entity body: {exc}") from None
    if not isinstance(name, str) or not name:
        raise _RequestError(400, "entity name must be a nonempty string")
    try:
        if kind == "point":
            if len(coords) != 1:
                raise ValueError("point entities take exactly one coordinate")
            geometry = coords[0]
        elif kind == "line":
            geometry = Polyline(coords)
        elif kind == "area":
            holes = [
                [Point(float(x), float(y)) for x, y in ring]
                for ring in body.get("holes", [])
            ]
            geometry = Polygon(coords, holes)
        else:
            raise ValueError(f"unknown kind {kind!r}")
    except (TypeError, ValueError) as exc:
        raise _RequestError(400, f"bad entity body: {exc}", SQLSTATE_CELL_DOMAIN) from None
    return kind, name, geometry


def _rects(codes) -> list[list[float]]:
    return [list(cell_rect(c)) for c in codes]


def _relation_payload(outcome) -> dict:
    payload = {"sqlstate": outcome.sqlstate}
    rel = outcome.result
    if isinstance(rel, int):
        payload.update(columns=[], kinds=[], rows=[], rowcount=rel)
    else:
        payload.update(
            columns=list(rel.column_names),
            kinds=[k.value for k in rel.kinds],
            rows=[[format_value(v) for v in row] for row in rel.sorted_rows()],
        )
    return payload


class Handler(BaseHTTPRequestHandler):
    server_version = "splsql"
    protocol_version = "HTTP/1.1"

    @property
    def state(self) -> AppState:
        return self.server.state  # type: ignore[attr-defined]

    def log_message(self, fmt, *args):  # keep test output quiet
        if getattr(self.server, "verbose", False):
            super().log_message(fmt, *args)

    # -- plumbing ---------------------------------------------------------------

    def _send_json(self, status: int, payload: dict) -> None:
        data = json.dumps(payload).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(data)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(data)

    def _send_error(self, err: _RequestError) -> None:
        payload = {"sqlstate": err.sqlstate, "message": err.message}
        if err.position is not None:
            payload["position"] = list(err.position)
        self._send_json(err.status, payload)

    def _read_body(self) -> dict:
        length = int(self.headers.get("Content-Length") or 0)
        raw = self.rfile.read(length) if length else b""
        if not raw:
            raise _RequestError(400, "request body required")
        try:
            body = json.loads(raw.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise _RequestError(400, f"bad JSON body: {exc}") from None
        if not isinstance(body, dict):
            raise _RequestError(400, "request body must be a JSON object")
        return body

    def _route(self, method: str) -> None:
        try:
            parts = [p for p in self.path.split("?")[0].split("/") if p]
            if method == "POST" and parts == ["query"]:
                self._post_query()
            elif method == "POST" and parts == ["entities"]:
                self._post_entities()
            elif method == "POST" and parts == ["encode"]:
                self._post_encode()
            elif method == "GET" and parts == ["tables"]:
                self._get_tables()
            elif (
                method == "GET"
                and len(parts) == 4
                and parts[0] == "entities"
                and parts[3] == "cells"
            ):
                self._get_cells(parts[1], parts[2])
            elif method == "DELETE" and len(parts) == 3 and parts[0] == "entities":
                self._delete_entity(parts[1], parts[2])
            elif method == "GET" and self.state.web_root is not None:
                self._serve_static(parts)
            else:
                raise _RequestError(404, f"no such endpoint: {method} {self.path}")
        except _RequestError as err:
            self._send_error(err)
        except BrokenPipeError:
            pass
        except Exception as exc:  # internal failure
            self._send_error(_RequestError(500, f"internal error: {exc}", "58000"))

    def do_POST(self):
        self._route("POST")

    def do_GET(self):
        self._route("GET")

    def do_DELETE(self):
        self._route("DELETE")

    def do_OPTIONS(self):
        self.send_response(204)
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.send_header("Content-Length", "0")
        self.end_headers()

    # -- endpoints ----------------------------------------------------------------

    def _post_query(self) -> None:
        body = self._read_body()
        sql = body.get("sql")
        if not isinstance(sql, str):
            raise _RequestError(400, "body needs an 'sql' string")
        bindings = None
        if body.get("bindings") is not None:
            raw = body["bindings"]
            if not isinstance(raw, dict):
                raise _RequestError(400, "'bindings' must be an object")
            bindings = {k: _decode_binding(v) for k, v in raw.items()}
        try:
            stmt = parse_statement(sql)
        except SplError as exc:
            raise _RequestError(400, exc.message, exc.sqlstate, exc.position) from None
        if isinstance(stmt, _MUTATING):
            with self.state.write_lock:
                outcome = run_statement(self.state.db, stmt, bindings)
                if outcome.ok and outcome.db is not self.state.db:
                    self.state.commit(outcome.db)
        else:
            outcome = run_statement(self.state.db, stmt, bindings)
        if not outcome.ok:
            raise _RequestError(400, outcome.message or "statement failed",
                                outcome.sqlstate, outcome.position)
        self._send_json(200, _relation_payload(outcome))

    def _post_entities(self) -> None:
        body = self._read_body()
        kind, name, geometry = _geometry_from_body(body)
        level = body.get("level")
        with self.state.write_lock:
            try:
                db, count = self.state.db.store_entity(kind, name, geometry, level)
            except SplError as exc:
                raise _RequestError(400, exc.message, exc.sqlstate) from None
            except (CellRangeError, OutOfWindowError) as exc:
                raise _RequestError(400, str(exc), spatial_state_for(exc)) from None
            self.state.commit(db)
        payload = {"stored_codes": count}
        if count == 0:
            payload["warning"] = f"entity {name!r} rasterized to no cells"
        self._send_json(200, payload)

    def _post_encode(self) -> None:
        body = self._read_body()
        kind, _name, geometry = _geometry_from_body(body)
        db = self.state.db
        level = body.get("level")
        if level is None:
            level = db.default_level
        try:
            if kind == "point":
                cover = raster_point(db.window, geometry, level)
            elif kind == "line":
                cover = raster_polyline(db.window, geometry, level)
            else:
                cover = raster_polygon(db.window, geometry, level)
        except (CellRangeError, OutOfWindowError) as exc:
            raise _RequestError(400, str(exc), spatial_state_for(exc)) from None
        codes = list(cover)
        self._send_json(
            200, {"codes": [c.to_text() for c in codes], "rects": _rects(codes)}
        )

    def _get_tables(self) -> None:
        db = self.state.db
        tables = [
            {
                "name": name,
                "columns": [[col, kind.value] for col, kind in rel.schema],
                "rows": len(rel),
            }
            for name, rel in sorted(db.tables.items())
        ]
        self._send_json(
            200,
            {
                "tables": tables,
                "window": list(db.window.window),
                "default_level": db.default_level,
            },
        )

    def _get_cells(self, table: str, name: str) -> None:
        db = self.state.db
        if not db.has_table(table):
            raise _RequestError(404, f"unknown table {table!r}", "42P01")
        try:
            codes = db.entity_codes(table, name)
        except SplError as exc:
            raise _RequestError(400, exc.message, exc.sqlstate) from None
        if not codes:
            raise _RequestError(404, f"no entity {name!r} in {table}", "02000")
        self._send_json(
            200, {"codes": [c.to_text() for c in codes], "rects": _rects(codes)}
        )

    def _delete_entity(self, table: str, name: str) -> None:
        with self.state.write_lock:
            db = self.state.db
            if not db.has_table(table):
                raise _RequestError(404, f"unknown table {table!r}", "42P01")
            db2, removed = db.delete_entity(table, name)
            if removed == 0:
                raise _RequestError(404, f"no entity {name!r} in {table}", "02000")
            self.state.commit(db2)
        self._send_json(200, {"removed_rows": removed})

    def _serve_static(self, parts: list[str]) -> None:
        root = self.state.web_root
        rel = "/".join(parts) or "index.html"
        target = (root / rel).resolve()
        if not target.is_relative_to(root.resolve()) or not target.is_file():
            raise _RequestError(404, f"not found: /{rel}")
        data = target.read_bytes()
        ctype = mimetypes.guess_type(target.name)[0] or "application/octet-stream"
        self.send_response(200)
        self.send_header("Content-Type", ctype)
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)


def make_server(db_path, port: int = 7474, host: str = "127.0.0.1",
                web_root=None, verbose: bool = False) -> ThreadingHTTPServer:
    """Load the database and build a ready-to-run HTTP server."""
    db = load_db(db_path)
    server = ThreadingHTTPServer((host, port), Handler)
    server.state = AppState(db, db_path, Path(web_root) if web_root else None)  # type: ignore[attr-defined]
    server.verbose = verbose  # type: ignore[attr-defined]
    return server


def serve(db_path, port: int = 7474, host: str = "127.0.0.1",
          web_root=None, verbose: bool = True) -> None:
    """Run the service until interrupted."""
    server = make_server(db_path, port, host, web_root, verbose)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()


__all__ = ["AppState", "Handler", "make_server", "serve"]
