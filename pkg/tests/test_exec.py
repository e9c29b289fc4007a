"""Statement execution: states, procedures, and the two bundled queries."""

import random

import pytest

from splsql.errors import RoutineError
from splsql.executor import call_procedure, define_procedure, run_sql
from splsql.geometry import Point, Polyline, WorldTransform
from splsql.parser import parse_statement
from splsql.quadcode import Quadcode, normalize, set_intersect
from splsql.relengine import Database, lines_through_point

from conftest import PAPER1_SQL, PAPER2_SQL, crossing_pair, small_random_db

UNIT = WorldTransform(0.0, 0.0, 1.0, 1.0)


def fresh_db():
    return Database.new(UNIT, 6)


def apply_sql(db, *statements):
    for text in statements:
        out = run_sql(db, text)
        assert out.ok, (text, out.sqlstate, out.message)
        db = out.db
    return db


class TestExecute:
    def test_query_states(self):
        db = apply_sql(fresh_db(), "INSERT INTO LINES VALUES ('A', Q'0')")
        assert run_sql(db, "SELECT * FROM LINES").sqlstate == "00000"
        assert run_sql(db, "SELECT * FROM LINES WHERE LINE = 'B'").sqlstate == "02000"

    def test_ddl_dml_counts(self):
        db = fresh_db()
        out = run_sql(db, "CREATE TABLE S (N TEXT)")
        assert out.result == 0 and out.sqlstate == "00000"
        out = run_sql(out.db, "INSERT INTO S VALUES ('a'), ('b'), ('a')")
        assert out.result == 2  # set semantics collapse the duplicate

    def test_unbound_param(self):
        db = fresh_db()
        out = run_sql(db, "SELECT * FROM LINES WHERE LINE = :nope")
        assert out.sqlstate == "42P02"

    def test_bound_param(self):
        db = apply_sql(fresh_db(), "INSERT INTO LINES VALUES ('A', Q'0')")
        out = run_sql(db, "SELECT CODE FROM LINES WHERE LINE = :who", {"who": "A"})
        assert out.ok and len(out.result) == 1

    def test_runtime_kind_check_on_binding(self):
        db = apply_sql(fresh_db(), "INSERT INTO LINES VALUES ('A', Q'0')")
        out = run_sql(db, "SELECT CODE FROM LINES WHERE LINE = :who", {"who": Quadcode("0")})
        assert out.sqlstate == "42804"

    def test_spatial_state_mapping(self):
        db = apply_sql(fresh_db(), "INSERT INTO LINES VALUES ('A', Q'0')")
        out = run_sql(db, "SELECT * FROM LINES WHERE QT_PARENT(Q'') = Q'0'")
        assert out.sqlstate == "SP003"
        out = run_sql(db, "SELECT * FROM LINES WHERE QT_NEIGHBOR(Q'0', 'UP') = Q'1'")
        assert out.sqlstate == "SP003"

    def test_failed_statement_keeps_snapshot(self):
        db = fresh_db()
        out = run_sql(db, "INSERT INTO LINES VALUES ('A', 'oops')")
        assert not out.ok and out.db is db

    def test_multiline_error_position(self):
        out = run_sql(fresh_db(), "SELECT CODE\nFROM LINES\nWHERE = 3")
        assert out.sqlstate == "42601" and out.position == (3, 7)


class TestProcedures:
    def test_define_and_call(self):
        db = apply_sql(
            fresh_db(),
            "INSERT INTO LINES VALUES ('A', Q'0'), ('A', Q'1'), ('B', Q'1')",
        )
        db = define_procedure(db, parse_statement(PAPER1_SQL))
        rel, state = call_procedure(db, "INETER_A_B", ["A", "B"])
        assert state == "00000"
        assert rel.rows == frozenset({(Quadcode("1"),)})

    def test_call_through_sql(self):
        db = apply_sql(
            fresh_db(),
            "INSERT INTO LINES VALUES ('A', Q'0'), ('B', Q'1')",
        )
        db = apply_sql(db, PAPER1_SQL)
        out = run_sql(db, "CALL INETER_A_B('A', 'B')")
        assert out.sqlstate == "02000" and len(out.result) == 0

    def test_call_unknown_is_42883(self):
        out = run_sql(fresh_db(), "CALL GHOST('x')")
        assert out.sqlstate == "42883"

    def test_call_arity_checked(self):
        db = apply_sql(fresh_db(), PAPER1_SQL)
        out = run_sql(db, "CALL INETER_A_B('only-one')")
        assert out.sqlstate == "42883"
        with pytest.raises(RoutineError):
            call_procedure(db, "INETER_A_B", ["x"])

    def test_redefinition_rejected(self):
        db = apply_sql(fresh_db(), PAPER1_SQL)
        out = run_sql(db, PAPER1_SQL)
        assert out.sqlstate == "42723"

    def test_sqlstate_never_passed(self):
        db = apply_sql(fresh_db(), PAPER2_SQL)
        assert len(db.procedures["ALL_LINES_A"].params) == 1


class TestPaperExample1:
    """Two crossing polylines, stored un-condensed at the same level."""

    def store_crossing(self, level=4):
        db = Database.new(UNIT, level)
        (p1, q1), (p2, q2) = crossing_pair(random.Random(3))
        db, _ = db.store_entity("line", "Insurgentes", Polyline([p1, q1]), level)
        db, _ = db.store_entity("line", "Reforma", Polyline([p2, q2]), level)
        return apply_sql(db, PAPER1_SQL)

    def test_crossing_lines_share_cells(self):
        db = self.store_crossing()
        rel, state = call_procedure(db, "INETER_A_B", ["Insurgentes", "Reforma"])
        assert state == "00000" and len(rel) >= 1
        # row-level result equals the region intersection of the two covers
        ins = normalize(r[1] for r in db.table("LINES").rows if r[0] == "Insurgentes")
        ref = normalize(r[1] for r in db.table("LINES").rows if r[0] == "Reforma")
        assert normalize(r[0] for r in rel.rows) == set_intersect(ins, ref)

    def test_disjoint_lines_return_empty_02000(self):
        db = Database.new(UNIT, 3)
        db, _ = db.store_entity("line", "N1", Polyline([Point(0.05, 0.05), Point(0.3, 0.05)]), 3)
        db, _ = db.store_entity("line", "N2", Polyline([Point(0.7, 0.9), Point(0.95, 0.9)]), 3)
        db = apply_sql(db, PAPER1_SQL)
        rel, state = call_procedure(db, "INETER_A_B", ["N1", "N2"])
        assert state == "02000" and len(rel) == 0


class TestPaperExample2:
    def test_division_equivalence_randomized(self):
        rng = random.Random(99)
        db0 = fresh_db()
        decl = parse_statement(PAPER2_SQL)
        for _ in range(100):
            db = small_random_db(rng)
            db = define_procedure(db, decl)
            names = {r[0] for r in db.table("POINTS").rows} | {"missing"}
            for name in names:
                via_sql, _ = call_procedure(db, "ALL_LINES_A", [name])
                builtin = lines_through_point(db, name)
                assert via_sql.rows == builtin.rows
                assert via_sql.kinds == builtin.kinds

    def test_empty_divisor_returns_all_lines(self):
        db = apply_sql(
            fresh_db(),
            "INSERT INTO LINES VALUES ('L1', Q'0'), ('L2', Q'1')",
            PAPER2_SQL,
        )
        rel, _ = call_procedure(db, "ALL_LINES_A", ["nowhere"])
        assert {r[0] for r in rel.rows} == {"L1", "L2"}
