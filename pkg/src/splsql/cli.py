"""Command-line front door: REPL, script runner, importer, service, report.

Exit codes: 0 all statements succeeded, 1 a statement failed, 2 usage or
I/O trouble. The database path comes from --db or the SPL_DB environment
variable (default ./spldb).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .errors import SplError, StorageError, spatial_state_for
from .executor import StatementOutcome, run_statement
from .geometry import WorldTransform, load_entities
from .parser import iter_statements, parse_statement
from .relengine import Database, Relation, format_value
from .storage import load_db, save_db

PROMPT = "spl> "
CONTINUE = "  -> "


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="splsql",
        description="spatial relational database with quadtree cell codes",
    )
    parser.add_argument(
        "--db",
        default=os.environ.get("SPL_DB", "./spldb"),
        help="database directory (default: $SPL_DB or ./spldb)",
    )
    parser.add_argument(
        "--output",
        choices=("table", "tsv", "json"),
        default="table",
        help="result format for run/repl (default: table)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("init", help="create an empty database")
    p.add_argument("--window", nargs=4, type=float, metavar=("MINX", "MINY", "MAXX", "MAXY"),
                   default=(0.0, 0.0, 1.0, 1.0))
    p.add_argument("--level", type=int, default=6, help="default resolution level")

    sub.add_parser("repl", help="interactive statement loop")

    p = sub.add_parser("run", help="run a ;-separated statement script")
    p.add_argument("file")

    p = sub.add_parser("import", help="store entities from a geometry JSON file")
    p.add_argument("file")
    p.add_argument("--level", type=int, default=None,
                   help="resolution level (default: database default)")

    p = sub.add_parser("serve", help="serve the HTTP endpoints")
    p.add_argument("--port", type=int, default=7474)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--web", default=None, help="also serve static files from this directory")

    p = sub.add_parser("report", help="write per-table TSVs and a map figure")
    p.add_argument("--out", default="report", help="output directory (default: ./report)")
    return parser


# -- result printing ---------------------------------------------------------------

def _format_cell(v) -> str:
    text = format_value(v)
    return "" if text is None else text


def _print_table(rel: Relation, out) -> None:
    headers = list(rel.column_names)
    rows = [[_format_cell(v) for v in row] for row in rel.sorted_rows()]
    widths = [len(h) for h in headers]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    print("  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip(), file=out)
    print("  ".join("-" * w for w in widths), file=out)
    for row in rows:
        print("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip(), file=out)


def print_outcome(outcome: StatementOutcome, mode: str, out=None) -> None:
    out = out or sys.stdout
    if mode == "json":
        payload = {"sqlstate": outcome.sqlstate}
        if isinstance(outcome.result, Relation):
            rel = outcome.result
            payload.update(
                columns=list(rel.column_names),
                kinds=[k.value for k in rel.kinds],
                rows=[[format_value(v) for v in row] for row in rel.sorted_rows()],
            )
        elif isinstance(outcome.result, int):
            payload["rowcount"] = outcome.result
        if outcome.message:
            payload["message"] = outcome.message
            if outcome.position:
                payload["position"] = list(outcome.position)
        print(json.dumps(payload), file=out)
        return
    if not outcome.ok:
        pos = ""
        if outcome.position:
            pos = f" at line {outcome.position[0]}, column {outcome.position[1]}"
        print(f"ERROR [{outcome.sqlstate}]{pos}: {outcome.message}", file=sys.stderr)
        return
    if isinstance(outcome.result, Relation):
        rel = outcome.result
        if mode == "tsv":
            print("\t".join(rel.column_names), file=out)
            for row in rel.sorted_rows():
                print("\t".join(_format_cell(v) for v in row), file=out)
            print(f"SQLSTATE {outcome.sqlstate}", file=sys.stderr)
        else:
            _print_table(rel, out)
            print(f"({len(rel)} rows)  SQLSTATE {outcome.sqlstate}", file=out)
    else:
        if mode == "tsv":
            print(f"SQLSTATE {outcome.sqlstate}", file=sys.stderr)
        else:
            print(f"OK ({outcome.result} rows)  SQLSTATE {outcome.sqlstate}", file=out)


# -- commands ---------------------------------------------------------------------

def cmd_init(args) -> int:
    path = Path(args.db)
    if (path / "catalog.json").exists():
        print(f"error: {path} already holds a database", file=sys.stderr)
        return 2
    db = Database.new(WorldTransform(*args.window), args.level)
    save_db(db, path)
    print(f"created {path} (window {tuple(args.window)}, level {args.level})")
    return 0


def cmd_run(args) -> int:
    db = load_db(args.db)
    try:
        text = Path(args.file).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        for stmt in iter_statements(text):
            outcome = run_statement(db, stmt)
            if not outcome.ok:
                print_outcome(outcome, args.output)
                return 1
            if outcome.db is not db:
                db = outcome.db
                save_db(db, args.db)
            print_outcome(outcome, args.output)
    except SplError as exc:
        pos = f" at line {exc.position[0]}, column {exc.position[1]}" if exc.position else ""
        print(f"ERROR [{exc.sqlstate}]{pos}: {exc.message}", file=sys.stderr)
        return 1
    return 0


def cmd_import(args) -> int:
    db_path = Path(args.db)
    try:
        window, entities = load_entities(args.file)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if (db_path / "catalog.json").exists():
        db = load_db(db_path)
    else:
        db = Database.new(window, args.level if args.level is not None else 6)
        print(f"initialized {db_path} from the file window")
    failures = 0
    for entity in entities:
        try:
            db, count = db.store_entity(entity.kind, entity.name, entity.geometry, args.level)
        except SplError as exc:
            print(f"{entity.name}: ERROR [{exc.sqlstate}] {exc.message}", file=sys.stderr)
            failures += 1
            continue
        except (ValueError, ArithmeticError) as exc:
            print(
                f"{entity.name}: ERROR [{spatial_state_for(exc)}] {exc}",
                file=sys.stderr,
            )
            failures += 1
            continue
        note = "" if count else "  (warning: no cells)"
        print(f"{entity.name}: {count} cells{note}")
    save_db(db, db_path)
    return 1 if failures else 0


def cmd_repl(args) -> int:
    try:
        import readline  # noqa: F401  (line editing when available)
    except ImportError:
        pass
    db = load_db(args.db)
    buffer: list[str] = []
    while True:
        try:
            line = input(CONTINUE if buffer else PROMPT)
        except EOFError:
            print()
            return 0
        except KeyboardInterrupt:
            print()
            buffer.clear()
            continue
        stripped = line.strip()
        if not buffer and stripped.startswith("\\"):
            if stripped == "\\q":
                return 0
            if stripped == "\\d":
                for name, rel in sorted(db.tables.items()):
                    cols = ", ".join(f"{c} {k.value}" for c, k in rel.schema)
                    print(f"{name}({cols})  {len(rel)} rows")
                continue
            print(f"unknown command {stripped} (try \\d or \\q)", file=sys.stderr)
            continue
        buffer.append(line)
        text = "\n".join(buffer)
        if ";" not in text:
            continue
        try:
            stmt = parse_statement(text)
        except SplError as exc:
            if "end of input" in exc.message:
                continue  # statement not finished yet (e.g. procedure body)
            print(f"ERROR [{exc.sqlstate}]: {exc}", file=sys.stderr)
            buffer.clear()
            continue
        buffer.clear()
        outcome = run_statement(db, stmt)
        if outcome.ok and outcome.db is not db:
            db = outcome.db
            save_db(db, args.db)
        print_outcome(outcome, args.output)


def cmd_serve(args) -> int:
    from .service import serve

    print(f"serving {args.db} on http://{args.host}:{args.port}")
    serve(args.db, args.port, args.host, args.web)
    return 0


def cmd_report(args) -> int:
    from .report import write_report

    db = load_db(args.db)
    for path in write_report(db, args.out):
        print(path)
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    handlers = {
        "init": cmd_init,
        "run": cmd_run,
        "import": cmd_import,
        "repl": cmd_repl,
        "serve": cmd_serve,
        "report": cmd_report,
    }
    try:
        return handlers[args.command](args)
    except StorageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
