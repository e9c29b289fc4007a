#!/usr/bin/env python3
"""Regenerate the demo database (demo/db) from demo/entities.json.

The demo ships without any procedures defined so the bundled scripts in
examples/ can be run against it as-is.
"""

from pathlib import Path

from splsql.geometry import load_entities
from splsql.relengine import Database
from splsql.storage import save_db

REPO = Path(__file__).resolve().parent.parent
LEVEL = 5


def main() -> None:
    window, entities = load_entities(REPO / "demo" / "entities.json")
    db = Database.new(window, LEVEL)
    for entity in entities:
        db, count = db.store_entity(entity.kind, entity.name, entity.geometry)
        print(f"{entity.name}: {count} cells")
    out = REPO / "demo" / "db"
    save_db(db, out)
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
