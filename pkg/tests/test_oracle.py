"""Brute-force oracle: frozen values plus metric/path properties."""

import random
from fractions import Fraction
from itertools import combinations

from l1dq import fixtures
from l1dq.geom import Point, is_visible, l1, l1_length, pt
from l1dq.oracle import oracle_all_from, oracle_distance, oracle_distance_path


def test_visible_pair_fix_e():
    e = fixtures.fix_e()
    d, path = oracle_distance_path(e, pt(5, 2), pt(30, 3))
    assert d == 26
    assert path == (pt(5, 2), pt(30, 3))


def test_blocked_pair_fix_h():
    h = fixtures.fix_h()
    d, path = oracle_distance_path(h, pt(5, 25), pt(35, 26))
    assert d > 31  # direct L1 is 31; the hole forces a detour
    assert l1_length(list(path)) == d
    # interior bends are polygon vertices
    for bend in path[1:-1]:
        assert bend in h.vertices
    for a, b in zip(path, path[1:]):
        assert is_visible(h, a, b)


def test_identical_endpoints():
    h = fixtures.fix_h()
    d, path = oracle_distance_path(h, pt(7, 7), pt(7, 7))
    assert d == 0 and path == (pt(7, 7),)


def test_all_from_fix_e_corners():
    e = fixtures.fix_e()
    targets = [pt(40, 1), pt(41, 40), pt(1, 41)]
    run = oracle_all_from(e, pt(0, 0), targets)
    assert run.dist == (41, 81, 42)


def test_symmetry_fix_h():
    h = fixtures.fix_h()
    for a, b in combinations(h.vertices, 2):
        assert oracle_distance(h, a, b) == oracle_distance(h, b, a)


def test_all_from_matches_pairwise():
    h = fixtures.fix_h()
    src = pt(10, 20)
    run = oracle_all_from(h, src, list(h.vertices))
    for v, d in zip(h.vertices, run.dist):
        assert d == oracle_distance(h, src, v)


def test_determinism():
    h = fixtures.fix_h()
    r1 = oracle_all_from(h, pt(5, 25), list(h.vertices))
    r2 = oracle_all_from(h, pt(5, 25), list(h.vertices))
    assert r1 == r2


def _random_interior(rng, domain):
    while True:
        p = Point(Fraction(rng.randrange(0, 41 * 4), 4),
                  Fraction(rng.randrange(0, 41 * 4), 4))
        if domain.locate(p) > 0:
            return p


def test_metric_properties_random():
    h = fixtures.fix_h()
    rng = random.Random(3)
    pts = [_random_interior(rng, h) for _ in range(8)]
    d = {}
    for a, b in combinations(pts, 2):
        dist, path = oracle_distance_path(h, a, b)
        d[(a, b)] = d[(b, a)] = dist
        # lower bound; equality iff the straight segment is unobstructed
        assert dist >= l1(a, b)
        if is_visible(h, a, b):
            assert dist == l1(a, b)
        # path validity
        assert l1_length(list(path)) == dist
        for u, v in zip(path, path[1:]):
            assert is_visible(h, u, v)
    for a, b, c in combinations(pts, 3):
        assert d[(a, c)] <= d[(a, b)] + d[(b, c)]
