"""Shared fixtures and randomized-case generators."""

from __future__ import annotations

import random
from fractions import Fraction
from pathlib import Path

import pytest

from splsql.geometry import Point, Polygon, WorldTransform
from splsql.quadcode import CodeSet, Quadcode, normalize
from splsql.relengine import Database

REPO = Path(__file__).resolve().parent.parent

PAPER1_SQL = (REPO / "examples" / "paper1.sql").read_text(encoding="utf-8")
PAPER2_SQL = (REPO / "examples" / "paper2.sql").read_text(encoding="utf-8")


@pytest.fixture
def unit_db() -> Database:
    return Database.new(WorldTransform(0.0, 0.0, 1.0, 1.0), 6)


def rand_code(rng: random.Random, max_level: int, min_level: int = 0) -> Quadcode:
    level = rng.randint(min_level, max_level)
    return Quadcode(rng.randrange(4) for _ in range(level))


def rand_codeset(rng: random.Random, max_level: int, count: int) -> CodeSet:
    return normalize(rand_code(rng, max_level) for _ in range(count))


def rand_grid_value(rng: random.Random, n: int) -> Fraction:
    """Coordinate in [0, n]; half lattice-aligned to stress boundary ties."""
    if rng.random() < 0.5:
        denom = rng.choice((1, 2, 4, 8))
        return Fraction(rng.randint(0, n * denom), denom)
    return Fraction(rng.uniform(0.0, float(n))).limit_denominator(1 << 20)


def rand_world_point(rng: random.Random, n: int) -> Point:
    """World point in the unit window whose grid image is a clean fraction."""
    gx = rand_grid_value(rng, n)
    gy = rand_grid_value(rng, n)
    return Point(float(gx / n), float(gy / n))


def crossing_pair(rng: random.Random):
    """Two properly crossing segments inside the unit window."""
    while True:
        cx, cy = rng.uniform(0.25, 0.75), rng.uniform(0.25, 0.75)
        a1 = rng.uniform(0, 3.14159)
        a2 = a1 + rng.uniform(0.4, 2.7)
        import math

        r = rng.uniform(0.08, 0.2)
        p1 = Point(cx - r * math.cos(a1), cy - r * math.sin(a1))
        q1 = Point(cx + r * math.cos(a1), cy + r * math.sin(a1))
        p2 = Point(cx - r * math.cos(a2), cy - r * math.sin(a2))
        q2 = Point(cx + r * math.cos(a2), cy + r * math.sin(a2))
        pts = (p1, q1, p2, q2)
        if all(0.0 <= p.x <= 1.0 and 0.0 <= p.y <= 1.0 for p in pts):
            return (p1, q1), (p2, q2)


def star_polygon(rng: random.Random, max_vertices: int = 9) -> Polygon:
    """Random star-shaped (hence simple) polygon in the unit window."""
    import math

    cx, cy = rng.uniform(0.3, 0.7), rng.uniform(0.3, 0.7)
    k = rng.randint(3, max_vertices)
    angles = sorted(rng.uniform(0, 2 * math.pi) for _ in range(k))
    if min(b - a for a, b in zip(angles, angles[1:])) < 1e-3:
        return star_polygon(rng, max_vertices)
    verts = []
    for a in angles:
        r = rng.uniform(0.05, 0.28)
        verts.append(Point(cx + r * math.cos(a), cy + r * math.sin(a)))
    return Polygon(verts)


def small_random_db(rng: random.Random, max_lines: int = 8, max_points: int = 4,
                    max_level: int = 3) -> Database:
    """Database of a few lines/points with random codes, for division tests."""
    db = Database.new()
    rows = []
    for i in range(rng.randint(1, max_lines)):
        name = f"L{i}"
        for _ in range(rng.randint(1, 5)):
            rows.append((name, rand_code(rng, max_level)))
    db, _ = db.insert_rows("LINES", rows)
    rows = []
    for i in range(rng.randint(1, max_points)):
        name = f"P{i}"
        for _ in range(rng.randint(1, 2)):
            rows.append((name, rand_code(rng, max_level)))
    db, _ = db.insert_rows("POINTS", rows)
    return db
