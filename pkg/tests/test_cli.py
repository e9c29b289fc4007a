"""Command-line behavior: scripts, imports, output modes, report, REPL."""

import json
import shutil
from pathlib import Path

import pytest

from splsql.cli import main
from splsql.quadcode import Quadcode
from splsql.storage import load_db

REPO = Path(__file__).resolve().parent.parent


@pytest.fixture
def db_path(tmp_path):
    path = tmp_path / "db"
    assert main(["--db", str(path), "init"]) == 0
    return path


@pytest.fixture
def demo_copy(tmp_path):
    target = tmp_path / "demo"
    shutil.copytree(REPO / "demo" / "db", target)
    return target


class TestInit:
    def test_creates_standard_tables(self, db_path):
        db = load_db(db_path)
        assert set(db.tables) == {"POINTS", "LINES", "AREAS"}

    def test_refuses_to_clobber(self, db_path, capsys):
        assert main(["--db", str(db_path), "init"]) == 2
        assert "already" in capsys.readouterr().err


class TestRun:
    def test_script_executes_and_prints(self, db_path, capsys):
        script = db_path.parent / "s.sql"
        script.write_text(
            "INSERT INTO LINES VALUES ('S', Q'0'), ('S', Q'1'), ('S', Q'3');\n"
            "SELECT CODE FROM LINES WHERE LINE = 'S';\n"
        )
        assert main(["--db", str(db_path), "run", str(script)]) == 0
        out = capsys.readouterr().out
        assert "SQLSTATE 00000" in out
        assert "CODE" in out and "3" in out
        # mutation persisted
        assert len(load_db(db_path).table("LINES")) == 3

    def test_empty_script_exits_zero(self, db_path, tmp_path):
        empty = tmp_path / "empty.sql"
        empty.write_text("")
        assert main(["--db", str(db_path), "run", str(empty)]) == 0

    def test_empty_result_is_success(self, db_path, tmp_path):
        script = tmp_path / "q.sql"
        script.write_text("SELECT * FROM LINES WHERE LINE = 'nope';")
        assert main(["--db", str(db_path), "run", str(script)]) == 0

    def test_syntax_error_positions_and_exit_1(self, db_path, tmp_path, capsys):
        script = tmp_path / "bad.sql"
        script.write_text("SELECT CODE FROM LINES;\nSELECT FROM;\n")
        assert main(["--db", str(db_path), "run", str(script)]) == 1
        err = capsys.readouterr().err
        assert "42601" in err and "line 2" in err

    def test_stops_at_first_error(self, db_path, tmp_path):
        script = tmp_path / "stop.sql"
        script.write_text(
            "INSERT INTO LINES VALUES ('a', Q'0');\n"
            "SELECT * FROM NOPE;\n"
            "INSERT INTO LINES VALUES ('b', Q'1');\n"
        )
        assert main(["--db", str(db_path), "run", str(script)]) == 1
        rows = load_db(db_path).table("LINES").rows
        assert ("a", Quadcode("0")) in rows and ("b", Quadcode("1")) not in rows

    def test_missing_file_is_usage_error(self, db_path):
        assert main(["--db", str(db_path), "run", "no-such-file.sql"]) == 2

    def test_paper_scripts_on_demo_fixture(self, demo_copy, capsys):
        for name in ("paper1.sql", "paper2.sql"):
            code = main(["--db", str(demo_copy), "run", str(REPO / "examples" / name)])
            assert code == 0, capsys.readouterr()
        call = demo_copy.parent / "call.sql"
        call.write_text(
            "CALL INETER_A_B('Insurgentes', 'Reforma');\nCALL ALL_LINES_A('A');\n"
        )
        assert main(["--db", str(demo_copy), "run", str(call)]) == 0
        out = capsys.readouterr().out
        assert "Insurgentes" in out and "Reforma" in out


class TestOutputModes:
    def fill(self, db_path):
        script = db_path.parent / "fill.sql"
        script.write_text("INSERT INTO LINES VALUES ('S', Q'30'), ('S', Q'2');")
        assert main(["--db", str(db_path), "run", str(script)]) == 0

    def test_tsv(self, db_path, capsys):
        self.fill(db_path)
        capsys.readouterr()
        script = db_path.parent / "q.sql"
        script.write_text("SELECT * FROM LINES;")
        assert main(["--db", str(db_path), "--output", "tsv", "run", str(script)]) == 0
        out = capsys.readouterr().out
        assert out == "LINE\tCODE\nS\t2\nS\t30\n"

    def test_json(self, db_path, capsys):
        self.fill(db_path)
        capsys.readouterr()
        script = db_path.parent / "q.sql"
        script.write_text("SELECT * FROM LINES;")
        assert main(["--db", str(db_path), "--output", "json", "run", str(script)]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["sqlstate"] == "00000"
        assert payload["rows"] == [["S", "2"], ["S", "30"]]

    def test_table_pads_and_orders(self, db_path, capsys):
        self.fill(db_path)
        capsys.readouterr()
        script = db_path.parent / "q.sql"
        script.write_text("SELECT * FROM LINES;")
        assert main(["--db", str(db_path), "run", str(script)]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "LINE  CODE"
        assert lines[1] == "----  ----"
        assert lines[2] == "S     2"


class TestImport:
    def test_import_counts(self, tmp_path, capsys):
        target = tmp_path / "fresh"
        code = main(["--db", str(target), "import", str(REPO / "demo" / "entities.json")])
        assert code == 0
        out = capsys.readouterr().out
        assert "Insurgentes" in out and "cells" in out
        db = load_db(target)
        assert len(db.table("LINES")) > 0
        assert len(db.table("AREAS")) > 0

    def test_entity_error_continues(self, db_path, tmp_path, capsys):
        doc = {
            "window": [0, 0, 1, 1],
            "entities": [
                {"kind": "point", "name": "in", "coords": [[0.5, 0.5]]},
                {"kind": "point", "name": "out", "coords": [[9, 9]]},
                {"kind": "point", "name": "in2", "coords": [[0.25, 0.25]]},
            ],
        }
        f = tmp_path / "e.json"
        f.write_text(json.dumps(doc))
        assert main(["--db", str(db_path), "import", str(f)]) == 1
        err = capsys.readouterr().err
        assert "SP002" in err
        db = load_db(db_path)
        names = {r[0] for r in db.table("POINTS").rows}
        assert names == {"in", "in2"}

    def test_bad_entity_names_index(self, db_path, tmp_path, capsys):
        doc = {"window": [0, 0, 1, 1], "entities": [{"kind": "line", "name": "L", "coords": [[0, 0]]}]}
        f = tmp_path / "bad.json"
        f.write_text(json.dumps(doc))
        assert main(["--db", str(db_path), "import", str(f)]) == 2
        assert "entity 0" in capsys.readouterr().err


class TestReport:
    def test_writes_tsv_and_figure(self, demo_copy, tmp_path, capsys):
        out_dir = tmp_path / "rep"
        assert main(["--db", str(demo_copy), "report", "--out", str(out_dir)]) == 0
        for name in ("POINTS.tsv", "LINES.tsv", "AREAS.tsv", "map.png"):
            assert (out_dir / name).exists()
        assert (out_dir / "map.png").stat().st_size > 1000


class TestRepl:
    def run_repl(self, monkeypatch, db_path, lines, capsys):
        feed = iter(lines)

        def fake_input(prompt=""):
            try:
                return next(feed)
            except StopIteration:
                raise EOFError from None

        monkeypatch.setattr("builtins.input", fake_input)
        code = main(["--db", str(db_path), "repl"])
        captured = capsys.readouterr()
        return code, captured

    def test_quit(self, monkeypatch, db_path, capsys):
        code, _ = self.run_repl(monkeypatch, db_path, ["\\q"], capsys)
        assert code == 0

    def test_eof_exits_cleanly(self, monkeypatch, db_path, capsys):
        code, _ = self.run_repl(monkeypatch, db_path, [], capsys)
        assert code == 0

    def test_describe_lists_tables(self, monkeypatch, db_path, capsys):
        code, cap = self.run_repl(monkeypatch, db_path, ["\\d", "\\q"], capsys)
        assert code == 0
        for table in ("POINTS", "LINES", "AREAS"):
            assert table in cap.out

    def test_multiline_statement(self, monkeypatch, db_path, capsys):
        code, cap = self.run_repl(
            monkeypatch,
            db_path,
            [
                "INSERT INTO LINES",
                "VALUES ('S', Q'0');",
                "SELECT CODE FROM LINES WHERE LINE='S';",
                "\\q",
            ],
            capsys,
        )
        assert code == 0
        assert "SQLSTATE 00000" in cap.out

    def test_procedure_spans_internal_semicolon(self, monkeypatch, db_path, capsys):
        lines = (REPO / "examples" / "paper1.sql").read_text().splitlines()
        code, cap = self.run_repl(monkeypatch, db_path, [*lines, "\\q"], capsys)
        assert code == 0
        assert "SQLSTATE 00000" in cap.out
        assert "INETER_A_B" in load_db(db_path).procedures

    def test_error_recovers(self, monkeypatch, db_path, capsys):
        code, cap = self.run_repl(
            monkeypatch, db_path,
            ["SELECT nope FROM LINES;", "SELECT * FROM LINES;", "\\q"],
            capsys,
        )
        assert code == 0
        assert "42703" in cap.err
        assert "SQLSTATE 02000" in cap.out
