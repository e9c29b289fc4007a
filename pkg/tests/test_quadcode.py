"""Cell addressing: encode/decode, hierarchy, neighbors, metrics."""

import math
import random

import pytest
from hypothesis import given, strategies as st

from splsql.errors import CellRangeError, DepthOverflowError
from splsql.quadcode import (
    MAX_LEVEL,
    Direction,
    GridCell,
    Quadcode,
    adjacent,
    canonical_order,
    cell_rect,
    children_of,
    common,
    contains,
    decode_cell,
    dist,
    encode_cell,
    neighbor,
    parent_of,
)

from oracles import neighbor_oracle

digit_lists = st.lists(st.integers(0, 3), max_size=MAX_LEVEL)


class TestQuadcode:
    def test_construction(self):
        assert Quadcode("32").digits == (3, 2)
        assert Quadcode((3, 2)) == Quadcode("32")
        assert Quadcode().level == 0
        assert str(Quadcode("0123")) == "0123"

    def test_bad_digits(self):
        with pytest.raises(CellRangeError):
            Quadcode("34")
        with pytest.raises(CellRangeError):
            Quadcode((4,))
        with pytest.raises(DepthOverflowError):
            Quadcode("0" * 17)

    def test_text_form(self):
        assert Quadcode().to_text() == "@"
        assert Quadcode.from_text("@") == Quadcode()
        assert Quadcode.from_text("32").to_text() == "32"

    @given(digit_lists)
    def test_digits_roundtrip(self, digits):
        assert Quadcode(digits).digits == tuple(digits)


class TestEncodeDecode:
    def test_encode_examples(self):
        assert str(encode_cell(0, 0, 1)) == "0"
        assert str(encode_cell(2, 3, 2)) == "32"
        assert str(encode_cell(0, 0, 0)) == ""

    def test_decode_examples(self):
        assert decode_cell(Quadcode("32")) == GridCell(2, 3, 2)
        assert decode_cell(Quadcode()) == GridCell(0, 0, 0)
        assert decode_cell(Quadcode("3")) == GridCell(1, 1, 1)

    def test_encode_range_errors(self):
        with pytest.raises(CellRangeError):
            encode_cell(2, 0, 1)
        with pytest.raises(CellRangeError):
            encode_cell(-1, 0, 1)
        with pytest.raises(CellRangeError):
            encode_cell(0, 0, MAX_LEVEL + 1)

    def test_roundtrip_exhaustive_level4(self):
        for level in range(5):
            n = 1 << level
            for x in range(n):
                for y in range(n):
                    assert decode_cell(encode_cell(x, y, level)) == (x, y, level)

    def test_roundtrip_deep(self):
        rng = random.Random(7)
        for _ in range(200):
            level = rng.randint(0, MAX_LEVEL)
            n = 1 << level
            x, y = rng.randrange(n) if n else 0, rng.randrange(n) if n else 0
            assert decode_cell(encode_cell(x, y, level)) == (x, y, level)


class TestRects:
    def test_rect_examples(self):
        assert cell_rect(Quadcode()) == (0.0, 0.0, 1.0, 1.0)
        assert cell_rect(Quadcode("0")) == (0.0, 0.0, 0.5, 0.5)
        assert cell_rect(Quadcode("32")) == (0.5, 0.75, 0.75, 1.0)

    def test_children_tile_parent(self):
        rng = random.Random(3)
        for _ in range(50):
            code = Quadcode(rng.randrange(4) for _ in range(rng.randint(0, 6)))
            x0, y0, x1, y1 = cell_rect(code)
            kids = children_of(code)
            area = sum(
                (r[2] - r[0]) * (r[3] - r[1]) for r in map(cell_rect, kids)
            )
            assert math.isclose(area, (x1 - x0) * (y1 - y0))
            for kid in kids:
                kx0, ky0, kx1, ky1 = cell_rect(kid)
                assert x0 <= kx0 and kx1 <= x1 and y0 <= ky0 and ky1 <= y1


class TestHierarchy:
    def test_parent_examples(self):
        assert str(parent_of(Quadcode("32"))) == "3"
        assert parent_of(Quadcode("0")) == Quadcode()
        with pytest.raises(CellRangeError):
            parent_of(Quadcode())

    def test_children_examples(self):
        assert [str(c) for c in children_of(Quadcode())] == ["0", "1", "2", "3"]
        assert [str(c) for c in children_of(Quadcode("3"))] == ["30", "31", "32", "33"]
        with pytest.raises(DepthOverflowError):
            children_of(Quadcode("0" * MAX_LEVEL))

    def test_contains_examples(self):
        assert contains(Quadcode("3"), Quadcode("32"))
        assert not contains(Quadcode("32"), Quadcode("3"))
        assert not contains(Quadcode("0"), Quadcode("3"))
        assert contains(Quadcode("32"), Quadcode("32"))

    @given(digit_lists, digit_lists)
    def test_contains_matches_rects(self, da, db):
        a, b = Quadcode(da), Quadcode(db)
        ra, rb = cell_rect(a), cell_rect(b)
        geometric = (
            ra[0] <= rb[0] and ra[1] <= rb[1] and rb[2] <= ra[2] and rb[3] <= ra[3]
        )
        assert contains(a, b) == geometric

    def test_common_examples(self):
        assert common(Quadcode("3"), Quadcode("32")) == Quadcode("32")
        assert common(Quadcode("0"), Quadcode("3")) is None
        assert common(Quadcode("32"), Quadcode("32")) == Quadcode("32")


class TestCanonicalOrder:
    def test_examples(self):
        assert canonical_order(Quadcode("0"), Quadcode("1")) == -1
        assert canonical_order(Quadcode("3"), Quadcode("30")) == -1
        assert canonical_order(Quadcode("32"), Quadcode("32")) == 0
        assert canonical_order(Quadcode("30"), Quadcode("3")) == 1

    @given(digit_lists, digit_lists)
    def test_matches_lexicographic(self, da, db):
        a, b = Quadcode(da), Quadcode(db)
        ta, tb = tuple(da), tuple(db)
        expected = (ta > tb) - (ta < tb)
        assert canonical_order(a, b) == expected
        assert (a < b) == (expected == -1)


class TestNeighbor:
    def test_examples(self):
        assert neighbor(Quadcode("0"), Direction.EAST) == Quadcode("1")
        assert neighbor(Quadcode("1"), Direction.EAST) is None
        assert neighbor(Quadcode("32"), Direction.NORTH) == Quadcode("30")

    def test_root_has_none(self):
        with pytest.raises(CellRangeError):
            neighbor(Quadcode(), Direction.EAST)

    def test_matches_oracle_levels_1_to_4(self):
        for level in range(1, 5):
            n = 1 << level
            for x in range(n):
                for y in range(n):
                    code = encode_cell(x, y, level)
                    for d in Direction:
                        assert neighbor(code, d) == neighbor_oracle(code, d.value)

    def test_symmetry(self):
        rng = random.Random(11)
        pairs = ((Direction.EAST, Direction.WEST), (Direction.NORTH, Direction.SOUTH))
        for _ in range(300):
            level = rng.randint(1, MAX_LEVEL)
            code = Quadcode(rng.randrange(4) for _ in range(level))
            for fwd, back in pairs:
                for a, b in ((fwd, back), (back, fwd)):
                    step = neighbor(code, a)
                    if step is not None:
                        assert neighbor(step, b) == code

    def test_direction_parse(self):
        assert Direction.parse("e") is Direction.EAST
        assert Direction.parse("North") is Direction.NORTH
        with pytest.raises(CellRangeError):
            Direction.parse("up")


class TestMetrics:
    def test_dist_examples(self):
        assert dist(Quadcode("0"), Quadcode("0")) == 0.0
        assert dist(Quadcode("0"), Quadcode("1")) == 0.5
        assert dist(Quadcode("0"), Quadcode("3")) == 0.7071067811865476

    def test_dist_mixed_levels(self):
        # centers (0.25, 0.25) and (0.125, 0.125)
        expected = math.hypot(0.125, 0.125)
        assert math.isclose(dist(Quadcode("0"), Quadcode("00")), expected)

    def test_adjacent_examples(self):
        assert adjacent(Quadcode("0"), Quadcode("1"))
        assert not adjacent(Quadcode("0"), Quadcode("3"))
        assert not adjacent(Quadcode("1"), Quadcode("32"))

    def test_adjacent_mixed_levels(self):
        assert adjacent(Quadcode("1"), Quadcode("03"))
        assert not adjacent(Quadcode("1"), Quadcode("02"))
        # containment is not adjacency
        assert not adjacent(Quadcode("3"), Quadcode("32"))
        assert not adjacent(Quadcode("3"), Quadcode("3"))

    def test_adjacent_is_symmetric(self):
        rng = random.Random(5)
        for _ in range(300):
            a = Quadcode(rng.randrange(4) for _ in range(rng.randint(0, 5)))
            b = Quadcode(rng.randrange(4) for _ in range(rng.randint(0, 5)))
            assert adjacent(a, b) == adjacent(b, a)
