"""Persistence: bit-exact round trips, canonical layout, corruption errors."""

import json

import pytest

from splsql.errors import StorageError
from splsql.executor import define_procedure
from splsql.geometry import WorldTransform
from splsql.parser import parse_statement
from splsql.quadcode import Quadcode
from splsql.relengine import Database, Kind
from splsql.storage import load_db, save_db

from conftest import PAPER1_SQL, PAPER2_SQL


def kitchen_sink_db() -> Database:
    """Every value kind, including the root code, Null, and awkward text."""
    db = Database.new(WorldTransform(-10.0, 2.5, 30.0, 40.0), 7)
    db, _ = db.insert_rows(
        "POINTS",
        [
            ("root", Quadcode()),
            ("deep", Quadcode("0123012301230123")),
            (None, Quadcode("2")),
            ("nullcode", None),
            ("", Quadcode("31")),
        ],
    )
    db = db.create_table("MISC", [("T", Kind.TEXT), ("N", Kind.NUMBER), ("C", Kind.CODE)])
    db, _ = db.insert_rows(
        "MISC",
        [
            ("tab\there", 1.5, Quadcode("0")),
            ("new\nline", -2.0, None),
            ("back\\slash", 0.1, Quadcode()),
            ("\\e", 1e300, Quadcode("3")),
            (None, None, None),
            ("plain", 42.0, Quadcode("123")),
        ],
    )
    db = define_procedure(db, parse_statement(PAPER1_SQL))
    db = define_procedure(db, parse_statement(PAPER2_SQL))
    return db


class TestRoundTrip:
    def test_value_exact(self, tmp_path):
        db = kitchen_sink_db()
        save_db(db, tmp_path / "db")
        loaded = load_db(tmp_path / "db")
        assert loaded.tables == db.tables
        assert loaded.window == db.window
        assert loaded.default_level == db.default_level
        assert set(loaded.procedures) == set(db.procedures)
        for name in db.procedures:
            assert loaded.procedures[name].text == db.procedures[name].text
            assert loaded.procedures[name].body == db.procedures[name].body

    def test_standard_db_roundtrip(self, tmp_path):
        db = Database.new()
        save_db(db, tmp_path / "db")
        assert load_db(tmp_path / "db") == db

    def test_save_is_deterministic(self, tmp_path):
        db = kitchen_sink_db()
        save_db(db, tmp_path / "a")
        save_db(db, tmp_path / "b")
        for f in sorted(p.name for p in (tmp_path / "a").iterdir()):
            assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()

    def test_resave_after_reload_is_identical(self, tmp_path):
        db = kitchen_sink_db()
        save_db(db, tmp_path / "a")
        save_db(load_db(tmp_path / "a"), tmp_path / "b")
        for f in sorted(p.name for p in (tmp_path / "a").iterdir()):
            assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()


class TestFormat:
    def test_root_spelled_at(self, tmp_path):
        db = Database.new()
        db, _ = db.insert_rows("POINTS", [("r", Quadcode()), ("c", Quadcode("32"))])
        save_db(db, tmp_path / "db")
        body = (tmp_path / "db" / "POINTS.tsv").read_text()
        assert "r\t@" in body and "c\t32" in body

    def test_null_is_empty_field(self, tmp_path):
        db = Database.new()
        db, _ = db.insert_rows("POINTS", [("n", None)])
        save_db(db, tmp_path / "db")
        lines = (tmp_path / "db" / "POINTS.tsv").read_text().splitlines()
        assert lines[1] == "n\t"

    def test_empty_string_distinct_from_null(self, tmp_path):
        db = Database.new()
        db, _ = db.insert_rows("POINTS", [("", Quadcode("0")), (None, Quadcode("1"))])
        save_db(db, tmp_path / "db")
        loaded = load_db(tmp_path / "db")
        assert ("", Quadcode("0")) in loaded.table("POINTS").rows
        assert (None, Quadcode("1")) in loaded.table("POINTS").rows

    def test_rows_in_canonical_order(self, tmp_path):
        db = Database.new()
        db, _ = db.insert_rows(
            "POINTS",
            [("b", Quadcode("30")), ("a", Quadcode("3")), ("a", Quadcode("1"))],
        )
        save_db(db, tmp_path / "db")
        lines = (tmp_path / "db" / "POINTS.tsv").read_text().splitlines()
        assert lines[1:] == ["a\t1", "a\t3", "b\t30"]


class TestLoadErrors:
    def test_missing_catalog(self, tmp_path):
        with pytest.raises(StorageError, match="catalog.json"):
            load_db(tmp_path / "nope")

    def test_corrupt_catalog_names_file(self, tmp_path):
        d = tmp_path / "db"
        d.mkdir()
        (d / "catalog.json").write_text("{not json")
        with pytest.raises(StorageError, match="catalog.json"):
            load_db(d)

    def test_missing_table_file(self, tmp_path):
        save_db(Database.new(), tmp_path / "db")
        (tmp_path / "db" / "LINES.tsv").unlink()
        with pytest.raises(StorageError, match="LINES.tsv"):
            load_db(tmp_path / "db")

    def test_bad_value_names_file_and_line(self, tmp_path):
        save_db(Database.new(), tmp_path / "db")
        (tmp_path / "db" / "LINES.tsv").write_text("LINE\tCODE\nx\t9\n")
        with pytest.raises(StorageError, match=r"LINES.tsv: line 2"):
            load_db(tmp_path / "db")

    def test_header_mismatch(self, tmp_path):
        save_db(Database.new(), tmp_path / "db")
        (tmp_path / "db" / "LINES.tsv").write_text("WRONG\tCODE\n")
        with pytest.raises(StorageError, match="header"):
            load_db(tmp_path / "db")

    def test_failed_save_leaves_previous_state(self, tmp_path):
        db = Database.new()
        db, _ = db.insert_rows("POINTS", [("keep", Quadcode("0"))])
        save_db(db, tmp_path / "db")
        before = {p.name: p.read_bytes() for p in (tmp_path / "db").iterdir()}
        # a crashed save would leave at most *.tmp litter; the real files survive
        (tmp_path / "db" / "POINTS.tsv.tmp").write_text("garbage")
        loaded = load_db(tmp_path / "db")
        assert ("keep", Quadcode("0")) in loaded.table("POINTS").rows
        after = {p.name: p.read_bytes() for p in (tmp_path / "db").iterdir() if not p.name.endswith(".tmp")}
        assert after == before
