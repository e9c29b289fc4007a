"""Linear-quadtree cell addressing and multi-resolution region algebra.

A cell address is a string of base-4 digits; digit k picks a quadrant at
depth k (0=NW, 1=NE, 2=SW, 3=SE, row-major with the origin at the top-left).
The empty digit string is the root cell covering the whole unit square.
Regions are prefix-free sets of such cells, possibly at mixed resolution.

Internally a code packs into a single int (two bits per digit, left-aligned
in a 32-bit field, plus 5 level bits) so sorting by the packed key is exactly
the canonical order: lexicographic on digits, a prefix before its extensions.
The set operations work directly on sorted key lists.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from enum import Enum
from typing import Iterable, Iterator, NamedTuple, Optional

from .errors import CellRangeError, DepthOverflowError

MAX_LEVEL = 16

_BITS_WIDTH = 2 * MAX_LEVEL  # digit field width
_LEVEL_BITS = 5              # enough for levels 0..16


class Direction(Enum):
    """The four edge-neighbor directions on the grid (y grows downward)."""

    NORTH = "N"
    SOUTH = "S"
    EAST = "E"
    WEST = "W"

    @classmethod
    def parse(cls, text: str) -> "Direction":
        t = text.strip().upper()
        for d in cls:
            if t == d.value or t == d.name:
                return d
        raise CellRangeError(f"not a direction: {text!r} (expected N, S, E or W)")


class GridCell(NamedTuple):
    """Column/row view of a cell at a resolution level (0 <= x,y < 2**level)."""

    x: int
    y: int
    level: int


class Quadcode:
    """Immutable address of one quadtree cell.

    Construct from an iterable of digits or a digit string: Quadcode("32"),
    Quadcode((3, 2)), Quadcode() for the root.
    """

    __slots__ = ("_bits", "_level")

    def __init__(self, digits: Iterable[int] | str = ()):
        bits = 0
        n = 0
        for d in digits:
            try:
                d = int(d)
            except (TypeError, ValueError):
                raise CellRangeError(f"bad quadtree digit: {d!r}") from None
            if not 0 <= d <= 3:
                raise CellRangeError(f"bad quadtree digit: {d}")
            n += 1
            if n > MAX_LEVEL:
                raise DepthOverflowError(f"code deeper than MAX_LEVEL={MAX_LEVEL}")
            bits |= d << (_BITS_WIDTH - 2 * n)
        self._bits = bits
        self._level = n

    @classmethod
    def _from_key(cls, key: int) -> "Quadcode":
        obj = object.__new__(cls)
        obj._bits = key >> _LEVEL_BITS
        obj._level = key & 0x1F
        return obj

    @classmethod
    def from_text(cls, text: str) -> "Quadcode":
        """Parse the textual form: digit string, or the lone token '@' for the root."""
        if text == "@":
            return cls()
        return cls(text)

    def to_text(self) -> str:
        """Textual form: digit string, root spelled '@'."""
        return str(self) if self._level else "@"

    @property
    def level(self) -> int:
        return self._level

    @property
    def digits(self) -> tuple[int, ...]:
        b, n = self._bits, self._level
        return tuple((b >> (_BITS_WIDTH - 2 * k)) & 3 for k in range(1, n + 1))

    @property
    def _key(self) -> int:
        return (self._bits << _LEVEL_BITS) | self._level

    def __str__(self) -> str:
        return "".join(str(d) for d in self.digits)

    def __repr__(self) -> str:
        return f"Quadcode({str(self)!r})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Quadcode):
            return NotImplemented
        return self._bits == other._bits and self._level == other._level

    def __hash__(self) -> int:
        return hash(self._key)

    def __lt__(self, other) -> bool:
        if not isinstance(other, Quadcode):
            return NotImplemented
        return self._key < other._key

    def __le__(self, other) -> bool:
        if not isinstance(other, Quadcode):
            return NotImplemented
        return self._key <= other._key

    def __gt__(self, other) -> bool:
        if not isinstance(other, Quadcode):
            return NotImplemented
        return self._key > other._key

    def __ge__(self, other) -> bool:
        if not isinstance(other, Quadcode):
            return NotImplemented
        return self._key >= other._key


ROOT = Quadcode()


# --- key-level helpers (hot paths) -------------------------------------------

def _key_level(key: int) -> int:
    return key & 0x1F

def _key_bits(key: int) -> int:
    return key >> _LEVEL_BITS

def _is_prefix_key(a: int, b: int) -> bool:
    """True iff code a is a prefix of (or equal to) code b, on packed keys."""
    la = a & 0x1F
    if la > (b & 0x1F):
        return False
    shift = _BITS_WIDTH - 2 * la
    return (a >> _LEVEL_BITS) >> shift == ((b >> _LEVEL_BITS) >> shift)

def _condense(keys: list[int]) -> list[int]:
    """Collapse a canonically sorted key list to normal form.

    Drops keys covered by an earlier key and merges complete sibling
    quadruples into their parent, cascading upward. Single linear pass:
    in canonical order a covering ancestor, when kept, is always the top
    of the output stack while its subtree streams by.
    """
    out: list[int] = []
    for k in keys:
        if out:
            t = out[-1]
            if t == k or _is_prefix_key(t, k):
                continue
        out.append(k)
        while len(out) >= 4:
            k3 = out[-1]
            lvl = k3 & 0x1F
            if lvl == 0:
                break
            shift = _BITS_WIDTH - 2 * lvl
            if (k3 >> (_LEVEL_BITS + shift)) & 3 != 3:
                break
            step = 1 << (_LEVEL_BITS + shift)
            base = k3 - 3 * step
            if out[-4] == base and out[-3] == base + step and out[-2] == base + 2 * step:
                del out[-4:]
                parent = (base & ~0x1F) | (lvl - 1)
                out.append(parent)
            else:
                break
    return out

def _subtree_end(key: int) -> int:
    """Largest possible key of a descendant of `key` (inclusive bound)."""
    lvl = key & 0x1F
    bits = key >> _LEVEL_BITS
    rest = (1 << (_BITS_WIDTH - 2 * lvl)) - 1 if lvl < MAX_LEVEL else 0
    return ((bits | rest) << _LEVEL_BITS) | MAX_LEVEL


class CodeSet:
    """Sorted, prefix-free set of cells representing a region.

    Outputs of normalize() and the set operations are fully condensed (no
    four complete siblings survive); the plain constructor keeps whatever
    resolution it is given, which is how uniform-level line covers stay
    uniform. Construction rejects nested codes.
    """

    __slots__ = ("_keys", "_codes")

    def __init__(self, codes: Iterable[Quadcode] = ()):
        keys = sorted({c._key for c in codes})
        for i in range(1, len(keys)):
            if _is_prefix_key(keys[i - 1], keys[i]):
                a = Quadcode._from_key(keys[i - 1])
                b = Quadcode._from_key(keys[i])
                raise CellRangeError(f"nested codes in CodeSet: {a!r} covers {b!r}")
        self._keys = keys
        self._codes = None

    @classmethod
    def _from_keys(cls, keys: list[int]) -> "CodeSet":
        obj = object.__new__(cls)
        obj._keys = keys
        obj._codes = None
        return obj

    @property
    def codes(self) -> tuple[Quadcode, ...]:
        if self._codes is None:
            self._codes = tuple(Quadcode._from_key(k) for k in self._keys)
        return self._codes

    def __iter__(self) -> Iterator[Quadcode]:
        return iter(self.codes)

    def __len__(self) -> int:
        return len(self._keys)

    def __bool__(self) -> bool:
        return bool(self._keys)

    def __contains__(self, code: Quadcode) -> bool:
        k = code._key
        i = bisect_right(self._keys, k)
        return i > 0 and self._keys[i - 1] == k

    def covers(self, code: Quadcode) -> bool:
        """True iff some member cell contains `code` (as a region membership test)."""
        k = code._key
        i = bisect_right(self._keys, k)
        return i > 0 and _is_prefix_key(self._keys[i - 1], k)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CodeSet):
            return NotImplemented
        return self._keys == other._keys

    def __hash__(self) -> int:
        return hash(tuple(self._keys))

    def __repr__(self) -> str:
        inner = ", ".join(repr(str(c)) for c in self.codes)
        return f"CodeSet([{inner}])"


EMPTY_SET = CodeSet()


# --- cell addressing ----------------------------------------------------------

def encode_cell(x: int, y: int, level: int) -> Quadcode:
    """Address of the cell in column x, row y of the 2**level grid.

    Digit k interleaves the k-th most significant bits: 2*y_k + x_k.
    """
    if not 0 <= level <= MAX_LEVEL:
        raise CellRangeError(f"level {level} out of range 0..{MAX_LEVEL}")
    n = 1 << level
    if not (0 <= x < n and 0 <= y < n):
        raise CellRangeError(f"cell ({x},{y}) out of range for level {level}")
    bits = 0
    for k in range(level):
        shift = level - 1 - k
        digit = 2 * ((y >> shift) & 1) + ((x >> shift) & 1)
        bits |= digit << (_BITS_WIDTH - 2 * (k + 1))
    q = object.__new__(Quadcode)
    q._bits = bits
    q._level = level
    return q


def decode_cell(code: Quadcode) -> GridCell:
    """Inverse of encode_cell."""
    x = y = 0
    for d in code.digits:
        x = (x << 1) | (d & 1)
        y = (y << 1) | (d >> 1)
    return GridCell(x, y, code.level)


def cell_rect(code: Quadcode) -> tuple[float, float, float, float]:
    """Half-open square of the cell in the unit square, as (x0, y0, x1, y1)."""
    x, y, level = decode_cell(code)
    s = 0.5 ** level
    return (x * s, y * s, (x + 1) * s, (y + 1) * s)


def parent_of(code: Quadcode) -> Quadcode:
    """Drop the last digit. The root has no parent."""
    if code.level == 0:
        raise CellRangeError("root cell has no parent")
    lvl = code._level - 1
    mask = ~((1 << (_BITS_WIDTH - 2 * lvl)) - 1)
    q = object.__new__(Quadcode)
    q._bits = code._bits & mask
    q._level = lvl
    return q


def children_of(code: Quadcode) -> tuple[Quadcode, Quadcode, Quadcode, Quadcode]:
    """The four child cells, in digit order 0..3."""
    if code.level >= MAX_LEVEL:
        raise DepthOverflowError(f"cell at MAX_LEVEL={MAX_LEVEL} has no children")
    lvl = code._level + 1
    shift = _BITS_WIDTH - 2 * lvl
    out = []
    for d in range(4):
        q = object.__new__(Quadcode)
        q._bits = code._bits | (d << shift)
        q._level = lvl
        out.append(q)
    return tuple(out)


def contains(a: Quadcode, b: Quadcode) -> bool:
    """True iff a's digits are a prefix of b's (equal codes contain each other)."""
    return _is_prefix_key(a._key, b._key)


def common(a: Quadcode, b: Quadcode) -> Optional[Quadcode]:
    """The deeper of two nested cells (their intersection); None when disjoint."""
    if _is_prefix_key(a._key, b._key):
        return b
    if _is_prefix_key(b._key, a._key):
        return a
    return None


def canonical_order(a: Quadcode, b: Quadcode) -> int:
    """-1/0/1 in the canonical order: lexicographic digits, prefix first."""
    ka, kb = a._key, b._key
    return (ka > kb) - (ka < kb)


def neighbor(code: Quadcode, direction: Direction) -> Optional[Quadcode]:
    """Same-level cell one step away, by digit arithmetic; None off the grid.

    One axis of the interleaved digits behaves as a binary counter, so only
    carry/borrow propagation from the last digit upward is needed.
    """
    if code.level == 0:
        raise CellRangeError("root cell has no neighbor")
    bits = code._bits
    level = code._level
    if direction is Direction.EAST or direction is Direction.WEST:
        axis_bit = 1
    else:
        axis_bit = 2
    # EAST/SOUTH increment the axis; WEST/NORTH decrement it.
    increment = direction is Direction.EAST or direction is Direction.SOUTH
    for k in range(level, 0, -1):
        shift = _BITS_WIDTH - 2 * k
        mask = axis_bit << shift
        if increment:
            if bits & mask:
                bits &= ~mask
            else:
                bits |= mask
                break
        else:
            if bits & mask:
                bits &= ~mask
                break
            else:
                bits |= mask
    else:
        return None  # carry/borrow ran off the top: no such cell
    q = object.__new__(Quadcode)
    q._bits = bits
    q._level = level
    return q


def dist(a: Quadcode, b: Quadcode) -> float:
    """Euclidean distance between the two cell centers, in unit-square units."""
    ax, ay, al = decode_cell(a)
    bx, by, bl = decode_cell(b)
    sa = 0.5 ** al
    sb = 0.5 ** bl
    dx = (ax + 0.5) * sa - (bx + 0.5) * sb
    dy = (ay + 0.5) * sa - (by + 0.5) * sb
    return math.hypot(dx, dy)


def _int_rect(code: Quadcode, level: int) -> tuple[int, int, int, int]:
    """Closed cell bounds scaled to integers at a deeper level's grid."""
    x, y, l = decode_cell(code)
    f = level - l
    return (x << f, y << f, (x + 1) << f, (y + 1) << f)


def adjacent(a: Quadcode, b: Quadcode) -> bool:
    """True iff the closed squares share an edge segment of positive length.

    Corner contact does not count, and neither does containment.
    """
    ka, kb = a._key, b._key
    if _is_prefix_key(ka, kb) or _is_prefix_key(kb, ka):
        return False
    lvl = max(a.level, b.level)
    ax0, ay0, ax1, ay1 = _int_rect(a, lvl)
    bx0, by0, bx1, by1 = _int_rect(b, lvl)
    if ax1 == bx0 or bx1 == ax0:
        return min(ay1, by1) > max(ay0, by0)
    if ay1 == by0 or by1 == ay0:
        return min(ax1, bx1) > max(ax0, bx0)
    return False


# --- region algebra -----------------------------------------------------------

def normalize(codes: Iterable[Quadcode] | CodeSet) -> CodeSet:
    """Condense any collection of cells to normal form.

    Removes duplicates and covered cells, merges complete sibling quadruples
    up to fixpoint, and sorts canonically. The covered point set is unchanged.
    """
    if isinstance(codes, CodeSet):
        keys = codes._keys
    else:
        keys = sorted({c._key for c in codes})
    return CodeSet._from_keys(_condense(keys))


def set_union(a: CodeSet, b: CodeSet) -> CodeSet:
    """Normalized union of the two regions."""
    keys = sorted(a._keys + b._keys)
    return CodeSet._from_keys(_condense(keys))


def set_intersect(a: CodeSet, b: CodeSet) -> CodeSet:
    """Normalized intersection: the deeper cell of every nested pair."""
    ka, kb = a._keys, b._keys
    out = []
    i = j = 0
    while i < len(ka) and j < len(kb):
        x, y = ka[i], kb[j]
        if _is_prefix_key(x, y):
            out.append(y)
            j += 1
        elif _is_prefix_key(y, x):
            out.append(x)
            i += 1
        elif x < y:
            i += 1
        else:
            j += 1
    out.sort()
    return CodeSet._from_keys(_condense(out))


def set_difference(a: CodeSet, b: CodeSet) -> CodeSet:
    """Normalized difference: cells of A split down to the depth of B's cells.

    Splitting never exceeds MAX_LEVEL because every code is at most that
    deep; the guard in children_of makes the overflow an explicit error.
    """
    kb = b._keys
    out: list[int] = []
    for k in a._keys:
        i = bisect_right(kb, k)
        if i > 0 and _is_prefix_key(kb[i - 1], k):
            continue  # fully covered by a coarser cell of B
        end = _subtree_end(k)
        j = i
        while j < len(kb) and kb[j] <= end:
            j += 1
        inside = kb[i:j]
        if not inside:
            out.append(k)
        else:
            _subtract_into(k, inside, out)
    return CodeSet._from_keys(_condense(out))


def _subtract_into(key: int, inside: list[int], out: list[int]) -> None:
    """Append `key` minus the descendant cells `inside` (sorted), in order."""
    lvl = key & 0x1F
    if lvl >= MAX_LEVEL:
        raise DepthOverflowError(
            f"difference would split past MAX_LEVEL={MAX_LEVEL}"
        )
    shift = _BITS_WIDTH - 2 * (lvl + 1)
    step = 1 << (_LEVEL_BITS + shift)
    child0 = ((key >> _LEVEL_BITS) << _LEVEL_BITS) | (lvl + 1)
    pos = 0
    for d in range(4):
        child = child0 + d * step
        end = _subtree_end(child)
        start = pos
        while pos < len(inside) and inside[pos] <= end:
            pos += 1
        part = inside[start:pos]
        if not part:
            out.append(child)
        elif part[0] == child:
            continue  # child removed entirely
        else:
            _subtract_into(child, part, out)


def set_area(a: CodeSet) -> float:
    """Total covered area as a fraction of the unit square."""
    return sum(0.25 ** (k & 0x1F) for k in a._keys)


def frontier(a: CodeSet, level: Optional[int] = None) -> CodeSet:
    """Cells of the region with at least one 4-neighbor outside it.

    Works at `level` (default: the deepest level present), expanding only
    the border ring of each cell, and re-normalizes the result. The grid
    boundary counts as outside.
    """
    if not a._keys:
        return EMPTY_SET
    deepest = max(k & 0x1F for k in a._keys)
    work = deepest if level is None else level
    if work < deepest or work > MAX_LEVEL:
        raise CellRangeError(f"working level {work} not in {deepest}..{MAX_LEVEL}")
    n = 1 << work
    out: list[int] = []

    def outside(x: int, y: int, ox0: int, oy0: int, ox1: int, oy1: int) -> bool:
        if not (0 <= x < n and 0 <= y < n):
            return True
        if ox0 <= x < ox1 and oy0 <= y < oy1:
            return False  # still within the owning cell
        return not a.covers(encode_cell(x, y, work))

    for k in a._keys:
        code = Quadcode._from_key(k)
        cx, cy, cl = decode_cell(code)
        f = work - cl
        x0, y0 = cx << f, cy << f
        span = 1 << f
        x1, y1 = x0 + span, y0 + span
        if span == 1:
            ring = ((x0, y0),)
        else:
            ring = tuple(
                {(x, y0) for x in range(x0, x1)}
                | {(x, y1 - 1) for x in range(x0, x1)}
                | {(x0, y) for y in range(y0, y1)}
                | {(x1 - 1, y) for y in range(y0, y1)}
            )
        for (x, y) in ring:
            if (
                outside(x - 1, y, x0, y0, x1, y1)
                or outside(x + 1, y, x0, y0, x1, y1)
                or outside(x, y - 1, x0, y0, x1, y1)
                or outside(x, y + 1, x0, y0, x1, y1)
            ):
                out.append(encode_cell(x, y, work)._key)
    out.sort()
    return CodeSet._from_keys(_condense(out))


def components(a: CodeSet) -> list[CodeSet]:
    """Partition into maximal edge-connected groups of cells.

    Components are ordered by their canonically smallest cell; cells within
    a component stay in canonical order. CodeSet members never nest, so the
    adjacency test reduces to shared-edge checks on scaled integer rects.
    """
    codes = a.codes
    m = len(codes)
    if m == 0:
        return []
    lvl = max(c.level for c in codes)
    rects = [_int_rect(c, lvl) for c in codes]

    def touching(i: int, j: int) -> bool:
        ax0, ay0, ax1, ay1 = rects[i]
        bx0, by0, bx1, by1 = rects[j]
        if ax1 == bx0 or bx1 == ax0:
            return min(ay1, by1) > max(ay0, by0)
        if ay1 == by0 or by1 == ay0:
            return min(ax1, bx1) > max(ax0, bx0)
        return False

    seen = [False] * m
    result = []
    for start in range(m):
        if seen[start]:
            continue
        stack = [start]
        seen[start] = True
        group = []
        while stack:
            i = stack.pop()
            group.append(i)
            for j in range(m):
                if not seen[j] and touching(i, j):
                    seen[j] = True
                    stack.append(j)
        group.sort()
        result.append(CodeSet._from_keys([a._keys[i] for i in group]))
    return result
