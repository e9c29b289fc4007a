"""Randomized stress at depths the example-driven tests do not reach."""

import random

from splsql.quadcode import (
    MAX_LEVEL,
    Quadcode,
    frontier,
    normalize,
    set_area,
    set_difference,
    set_intersect,
    set_union,
)

from oracles import pixel_set


def rand_set(rng, max_level, count):
    return normalize(
        Quadcode(rng.randrange(4) for _ in range(rng.randint(0, max_level)))
        for _ in range(count)
    )


def test_set_ops_at_level_8():
    rng = random.Random(123456)
    level = 8
    for case in range(120):
        a = rand_set(rng, level, rng.randint(0, 10))
        b = rand_set(rng, level, rng.randint(0, 10))
        pa, pb = pixel_set(a, level), pixel_set(b, level)
        assert pixel_set(set_union(a, b), level) == pa | pb, case
        assert pixel_set(set_intersect(a, b), level) == pa & pb, case
        assert pixel_set(set_difference(a, b), level) == pa - pb, case
        assert set_area(a) + set_area(b) == set_area(set_union(a, b)) + set_area(
            set_intersect(a, b)
        )


def test_normalize_to_max_level():
    rng = random.Random(2222)
    for _ in range(150):
        codes = [
            Quadcode(rng.randrange(4) for _ in range(rng.randint(0, MAX_LEVEL)))
            for _ in range(rng.randint(0, 40))
        ]
        s = normalize(codes)
        assert normalize(s) == s
        rng.shuffle(codes)
        assert normalize(codes) == s


def test_difference_membership_probes_at_max_level():
    """Spot-check set_difference as a pointwise predicate at full depth."""
    rng = random.Random(3333)
    for case in range(100):
        a = rand_set(rng, 6, 6)
        b = rand_set(rng, MAX_LEVEL, 4)
        d = set_difference(a, b)
        for _ in range(20):
            probe = Quadcode(rng.randrange(4) for _ in range(MAX_LEVEL))
            expected = a.covers(probe) and not b.covers(probe)
            assert d.covers(probe) == expected, (case, str(probe))


def test_frontier_matches_bruteforce_pixels():
    rng = random.Random(777)
    for case in range(120):
        max_level = rng.randint(1, 5)
        codes = [
            Quadcode(rng.randrange(4) for _ in range(rng.randint(0, max_level)))
            for _ in range(rng.randint(1, 10))
        ]
        a = normalize(codes)
        if not a:
            continue
        work = max(c.level for c in a)
        if rng.random() < 0.3:
            work = min(work + rng.randint(1, 2), 6)
        n = 1 << work
        pixels = pixel_set(a, work)
        brute = {
            (x, y)
            for (x, y) in pixels
            if any(
                nx < 0 or nx >= n or ny < 0 or ny >= n or (nx, ny) not in pixels
                for nx, ny in ((x - 1, y), (x + 1, y), (x, y - 1), (x, y + 1))
            )
        }
        assert pixel_set(frontier(a, work), work) == brute, (case, work)
