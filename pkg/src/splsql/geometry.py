"""World-coordinate geometry and its conversion to quadtree cell covers.

Points, polylines and polygons live in world units; a rectangular window
maps them affinely onto the unit grid (column index grows with world x,
row index with world y). Every rasterization decision is made in exact
rational arithmetic over half-open cells, so boundary ties are resolved
deterministically with no epsilon anywhere.

Cover semantics:
  * a segment covers the cells whose half-open square it touches
    (supercover: two geometrically crossing segments always share a cell);
  * a polygon covers the cells overlapping its even-odd interior with
    positive area (cells a ring merely grazes along their closed edge are
    not dragged in), which yields the condensed mixed-resolution blocks.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor
from typing import Iterable, Sequence

from .errors import CellRangeError, OutOfWindowError
from .quadcode import MAX_LEVEL, CodeSet, GridCell, _condense, encode_cell


@dataclass(frozen=True)
class Point:
    x: float
    y: float


@dataclass(frozen=True)
class Polyline:
    """Open chain of at least two vertices with nonzero total length."""

    vertices: tuple[Point, ...]

    def __init__(self, vertices: Iterable[Point]):
        vs = tuple(vertices)
        if len(vs) < 2:
            raise ValueError("polyline needs at least 2 vertices")
        if all(v == vs[0] for v in vs):
            raise ValueError("polyline has zero total length")
        object.__setattr__(self, "vertices", vs)

    def segments(self) -> list[tuple[Point, Point]]:
        return list(zip(self.vertices, self.vertices[1:]))


def _close_ring(vertices: Iterable[Point], what: str) -> tuple[Point, ...]:
    vs = list(vertices)
    if len(vs) >= 2 and vs[0] == vs[-1]:
        vs.pop()
    if len(vs) < 3:
        raise ValueError(f"{what} needs at least 3 distinct vertices")
    return tuple(vs)


@dataclass(frozen=True)
class Polygon:
    """Simple outer ring plus zero or more hole rings (even-odd interior).

    Rings may be given closed (first vertex repeated) or open. Simplicity
    and hole placement are the caller's responsibility; they are not
    repaired here.
    """

    outer: tuple[Point, ...]
    holes: tuple[tuple[Point, ...], ...] = ()

    def __init__(self, outer: Iterable[Point], holes: Iterable[Iterable[Point]] = ()):
        object.__setattr__(self, "outer", _close_ring(outer, "polygon outer ring"))
        object.__setattr__(
            self, "holes", tuple(_close_ring(h, "polygon hole ring") for h in holes)
        )

    def rings(self) -> list[tuple[Point, ...]]:
        return [self.outer, *self.holes]


@dataclass(frozen=True)
class WorldTransform:
    """Axis-aligned world window mapped affinely onto the unit grid."""

    min_x: float
    min_y: float
    max_x: float
    max_y: float

    def __post_init__(self):
        if not (self.max_x > self.min_x and self.max_y > self.min_y):
            raise ValueError("window must have positive width and height")

    @property
    def window(self) -> tuple[float, float, float, float]:
        return (self.min_x, self.min_y, self.max_x, self.max_y)

    def _grid(self, p: Point, n: int) -> tuple[Fraction, Fraction]:
        """Exact grid coordinates of p, scaled so cells are unit squares."""
        gx = (Fraction(p.x) - Fraction(self.min_x)) / (Fraction(self.max_x) - Fraction(self.min_x)) * n
        gy = (Fraction(p.y) - Fraction(self.min_y)) / (Fraction(self.max_y) - Fraction(self.min_y)) * n
        return gx, gy

    def _grid_closed(self, p: Point, n: int) -> tuple[Fraction, Fraction]:
        gx, gy = self._grid(p, n)
        if not (0 <= gx <= n and 0 <= gy <= n):
            raise OutOfWindowError(f"point ({p.x}, {p.y}) outside window {self.window}")
        return gx, gy


def _check_level(level: int) -> int:
    if not 0 <= level <= MAX_LEVEL:
        raise CellRangeError(f"level {level} out of range 0..{MAX_LEVEL}")
    return 1 << level


def world_to_grid(t: WorldTransform, p: Point, level: int) -> GridCell:
    """Cell containing p; half-open, so min edges belong and max edges do not."""
    n = _check_level(level)
    gx, gy = t._grid(p, n)
    if not (0 <= gx < n and 0 <= gy < n):
        raise OutOfWindowError(f"point ({p.x}, {p.y}) outside window {t.window}")
    return GridCell(floor(gx), floor(gy), level)


def raster_point(t: WorldTransform, p: Point, level: int) -> CodeSet:
    cell = world_to_grid(t, p, level)
    return CodeSet([encode_cell(*cell)])


# --- exact segment/cell predicates ---------------------------------------------

def _clip_unit(x0, y0, x1, y1, cx, cy):
    """Clip the closed segment to the closed unit cell at (cx, cy).

    Returns the clipped endpoints ((ax, ay), (bx, by)) or None.
    """
    tlo = Fraction(0)
    thi = Fraction(1)
    dx = x1 - x0
    dy = y1 - y0
    for p, d, lo in ((x0, dx, cx), (y0, dy, cy)):
        if d == 0:
            if p < lo or p > lo + 1:
                return None
        else:
            t1 = (lo - p) / d
            t2 = (lo + 1 - p) / d
            if t1 > t2:
                t1, t2 = t2, t1
            if t1 > tlo:
                tlo = t1
            if t2 < thi:
                thi = t2
            if tlo > thi:
                return None
    return (x0 + tlo * dx, y0 + tlo * dy), (x0 + thi * dx, y0 + thi * dy)


def _touches_halfopen(x0, y0, x1, y1, cx, cy) -> bool:
    """Does the closed segment meet the half-open square [cx,cx+1)x[cy,cy+1)?"""
    clipped = _clip_unit(x0, y0, x1, y1, cx, cy)
    if clipped is None:
        return False
    (ax, ay), (bx, by) = clipped
    if ax == cx + 1 and bx == cx + 1:
        return False
    if ay == cy + 1 and by == cy + 1:
        return False
    return True


def _touches_open(x0, y0, x1, y1, cx, cy) -> bool:
    """Does the closed segment meet the open square (cx,cx+1)x(cy,cy+1)?"""
    clipped = _clip_unit(x0, y0, x1, y1, cx, cy)
    if clipped is None:
        return False
    (ax, ay), (bx, by) = clipped
    for edge in (cx, cx + 1):
        if ax == edge and bx == edge:
            return False
    for edge in (cy, cy + 1):
        if ay == edge and by == edge:
            return False
    return True


def _segment_cells(x0, y0, x1, y1, n: int, predicate) -> set[tuple[int, int]]:
    """Cells of the n-grid satisfying `predicate` for the segment.

    Sweeps candidate rows/columns around the segment with a one-cell margin
    and lets the exact predicate decide every membership.
    """
    cells: set[tuple[int, int]] = set()
    ylo, yhi = (y0, y1) if y0 <= y1 else (y1, y0)
    r_lo = max(0, floor(ylo) - 1)
    r_hi = min(n - 1, floor(yhi) + 1)
    dx = x1 - x0
    dy = y1 - y0
    for r in range(r_lo, r_hi + 1):
        if dy == 0:
            xlo, xhi = (x0, x1) if x0 <= x1 else (x1, x0)
        else:
            t1 = (r - y0) / dy
            t2 = (r + 1 - y0) / dy
            if t1 > t2:
                t1, t2 = t2, t1
            tlo = max(Fraction(0), t1)
            thi = min(Fraction(1), t2)
            if tlo > thi:
                continue
            xa = x0 + tlo * dx
            xb = x0 + thi * dx
            xlo, xhi = (xa, xb) if xa <= xb else (xb, xa)
        c_lo = max(0, floor(xlo) - 1)
        c_hi = min(n - 1, floor(xhi) + 1)
        for c in range(c_lo, c_hi + 1):
            if predicate(x0, y0, x1, y1, c, r):
                cells.add((c, r))
    return cells


def raster_segment(t: WorldTransform, p: Point, q: Point, level: int) -> CodeSet:
    """Uniform-level supercover of the closed segment pq.

    Endpoints may lie anywhere in the closed window; a degenerate segment
    covers the single cell owning the point (or nothing when the point sits
    on a max edge, which no half-open cell owns).
    """
    n = _check_level(level)
    x0, y0 = t._grid_closed(p, n)
    x1, y1 = t._grid_closed(q, n)
    cells = _segment_cells(x0, y0, x1, y1, n, _touches_halfopen)
    keys = sorted(encode_cell(c, r, level)._key for c, r in cells)
    return CodeSet._from_keys(keys)


def raster_polyline(
    t: WorldTransform, line: Polyline, level: int, condense: bool = False
) -> CodeSet:
    """Union of the segment covers of a polyline.

    With condense=False (how line entities are stored) all codes stay at the
    given uniform level; condense=True merges complete sibling quadruples.
    """
    n = _check_level(level)
    cells: set[tuple[int, int]] = set()
    grid = [t._grid_closed(v, n) for v in line.vertices]
    for (x0, y0), (x1, y1) in zip(grid, grid[1:]):
        cells |= _segment_cells(x0, y0, x1, y1, n, _touches_halfopen)
    keys = sorted(encode_cell(c, r, level)._key for c, r in cells)
    if condense:
        return CodeSet._from_keys(_condense(keys))
    return CodeSet._from_keys(keys)


def _ring_area2(ring: Sequence[tuple[Fraction, Fraction]]) -> Fraction:
    """Twice the signed shoelace area of a closed ring."""
    total = Fraction(0)
    for (x0, y0), (x1, y1) in zip(ring, ring[1:] + [ring[0]]):
        total += x0 * y1 - x1 * y0
    return total


def raster_polygon(t: WorldTransform, poly: Polygon, level: int) -> CodeSet:
    """Condensed cover of the cells overlapping the polygon with positive area.

    Even-odd scanline fill over cell centers, plus every cell whose open
    square a ring edge passes through; the union is normalized, which
    produces the mixed block sizes of a condensed region.
    """
    n = _check_level(level)
    rings = [[t._grid_closed(v, n) for v in ring] for ring in poly.rings()]
    if _ring_area2(rings[0]) == 0:
        return CodeSet()

    edges = []
    for ring in rings:
        edges.extend(zip(ring, ring[1:] + [ring[0]]))

    cells: set[tuple[int, int]] = set()

    # Boundary: cells whose open square an edge passes through.
    for (x0, y0), (x1, y1) in edges:
        cells |= _segment_cells(x0, y0, x1, y1, n, _touches_open)

    # Interior: even-odd parity of cell centers, one scanline per row.
    ys = [y for ring in rings for (_, y) in ring]
    r_lo = max(0, floor(min(ys)))
    r_hi = min(n - 1, ceil(max(ys)))
    half = Fraction(1, 2)
    for r in range(r_lo, r_hi + 1):
        cy = r + half
        xs = []
        for (x0, y0), (x1, y1) in edges:
            if (y0 <= cy < y1) or (y1 <= cy < y0):
                xs.append(x0 + (cy - y0) * (x1 - x0) / (y1 - y0))
        xs.sort()
        for i in range(0, len(xs) - 1, 2):
            # centers c + 1/2 in [xs[i], xs[i+1])
            c_lo = max(0, ceil(xs[i] - half))
            c_hi = min(n - 1, ceil(xs[i + 1] - half) - 1)
            for c in range(c_lo, c_hi + 1):
                cells.add((c, r))

    keys = sorted(encode_cell(c, r, level)._key for c, r in cells)
    return CodeSet._from_keys(_condense(keys))


# --- geometry import format -----------------------------------------------------

ENTITY_KINDS = ("point", "line", "area")


@dataclass(frozen=True)
class Entity:
    """One named geometric entity from an import document."""

    kind: str
    name: str
    geometry: Point | Polyline | Polygon


def _coords_to_points(coords, what: str) -> list[Point]:
    pts = []
    for pair in coords:
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise ValueError(f"{what}: coordinates must be [x, y] pairs")
        pts.append(Point(float(pair[0]), float(pair[1])))
    return pts


def parse_entities(doc: dict) -> tuple[WorldTransform, list[Entity]]:
    """Parse the geometry import document.

    Format: {"window": [minx, miny, maxx, maxy],
             "entities": [{"kind": "point"|"line"|"area", "name": str,
                           "coords": [[x, y], ...], "holes": [[[x, y], ...]]?}]}
    Raises ValueError naming the offending entity index.
    """
    try:
        window = doc["window"]
        transform = WorldTransform(*(float(v) for v in window))
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"bad window: {exc}") from None
    entities = []
    for i, item in enumerate(doc.get("entities", [])):
        try:
            kind = item["kind"]
            name = item["name"]
            if kind not in ENTITY_KINDS:
                raise ValueError(f"unknown kind {kind!r}")
            if not isinstance(name, str) or not name:
                raise ValueError("entity name must be a nonempty string")
            coords = _coords_to_points(item["coords"], "coords")
            if kind == "point":
                if len(coords) != 1:
                    raise ValueError("point entities take exactly one coordinate")
                geometry: Point | Polyline | Polygon = coords[0]
            elif kind == "line":
                geometry = Polyline(coords)
            else:
                holes = [_coords_to_points(h, "hole") for h in item.get("holes", [])]
                geometry = Polygon(coords, holes)
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"entity {i}: {exc}") from None
        entities.append(Entity(kind, name, geometry))
    return transform, entities


def load_entities(path) -> tuple[WorldTransform, list[Entity]]:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    return parse_entities(doc)
