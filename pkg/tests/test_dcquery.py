"""Two-point query engine: divide-and-conquer vs baseline vs oracle."""

import math
import random

import pytest

from l1dq import fixtures
from l1dq.dcquery import baseline_query, build_index, query
from l1dq.gateways import compute_gateways
from l1dq.geom import PointOutsideDomain, is_visible, l1, pt
from l1dq.oracle import oracle_distance
from l1dq.randgen import random_domain, random_interior_point


def _dedup(seq):
    out = []
    seen = set()
    for x in seq:
        if x not in seen:
            seen.add(x)
            out.append(x)
    return out


def _check_path(domain, res, expected):
    length = sum(l1(a, b) for a, b in zip(res.path, res.path[1:]))
    assert length == expected
    for a, b in zip(res.path, res.path[1:]):
        assert is_visible(domain, a, b), (a, b)


def _work_bound(index, s, t):
    gs = compute_gateways(index.domain, index.graph, s)
    gt = compute_gateways(index.domain, index.graph, t, role="t")
    ns = len(_dedup(gs.all_ids() + gs.direct))
    nt = len(_dedup(gt.all_ids() + gt.direct))
    return 8 * (ns + nt * (1 + math.ceil(math.log2(ns + 1)))) + nt + 8


@pytest.fixture(scope="module")
def idx_e():
    return build_index(fixtures.fix_e())


@pytest.fixture(scope="module")
def idx_h():
    return build_index(fixtures.fix_h())


def test_query_trivial_same_point(idx_e):
    r = query(idx_e, pt(5, 5), pt(5, 5))
    assert r.distance == 0
    assert r.path == (pt(5, 5),)
    assert r.via is None


def test_query_trivial_visible(idx_h):
    s, t = pt(5, 5), pt(9, 12)
    r = query(idx_h, s, t)
    assert r.distance == l1(s, t)
    assert r.path[0] == s and r.path[-1] == t
    _check_path(idx_h.domain, r, r.distance)


def test_query_outside_raises(idx_e):
    with pytest.raises(PointOutsideDomain):
        query(idx_e, pt(-5, -5), pt(5, 5))
    with pytest.raises(PointOutsideDomain):
        query(idx_e, pt(5, 5), pt(1000, 5))


def test_query_worked_example_convex(idx_e):
    # convex fixture: every geodesic is a staircase, distance is plain L1
    s, t = pt(5, 2), pt(30, 3)
    r = query(idx_e, s, t)
    assert r.distance == 26
    _check_path(idx_e.domain, r, 26)


def test_query_worked_example_hole(idx_h):
    # the triangular hole separates s from t: the geodesic detours, so the
    # distance strictly exceeds the L1 lower bound of 31
    s, t = pt(5, 25), pt(35, 26)
    r = query(idx_h, s, t)
    assert r.distance == oracle_distance(idx_h.domain, s, t)
    assert r.distance > 31
    _check_path(idx_h.domain, r, r.distance)


@pytest.mark.parametrize("seed", [3, 11])
def test_query_agreement_fixtures(idx_h, seed):
    dom = idx_h.domain
    rng = random.Random(seed)
    done = 0
    while done < 40:
        den = rng.choice([1, 1, 2, 4])
        s = random_interior_point(dom, rng, denominator=den)
        t = random_interior_point(dom, rng, denominator=den)
        done += 1
        d0 = oracle_distance(dom, s, t)
        r = query(idx_h, s, t)
        b = baseline_query(idx_h, s, t)
        assert r.distance == d0, (s, t)
        assert b.distance == d0, (s, t)
        _check_path(dom, r, d0)
        _check_path(dom, b, d0)
        assert r.counters.coupled_evals <= _work_bound(idx_h, s, t), (s, t)


def test_query_agreement_random_domains():
    rng = random.Random(404)
    for _ in range(6):
        dom = random_domain(rng, n_outer=rng.randrange(10, 22),
                            n_holes=rng.randrange(1, 4))
        idx = build_index(dom)
        for _ in range(12):
            den = rng.choice([1, 2, 4])
            s = random_interior_point(dom, rng, denominator=den)
            t = random_interior_point(dom, rng, denominator=den)
            d0 = oracle_distance(dom, s, t)
            r = query(idx, s, t)
            assert r.distance == d0, (dom.outer, dom.holes, s, t)
            assert baseline_query(idx, s, t).distance == d0
            _check_path(dom, r, d0)
            assert r.counters.coupled_evals <= _work_bound(idx, s, t)


def test_query_symmetry(idx_h):
    rng = random.Random(71)
    dom = idx_h.domain
    for _ in range(25):
        s = random_interior_point(dom, rng)
        t = random_interior_point(dom, rng)
        assert query(idx_h, s, t).distance == query(idx_h, t, s).distance


def test_query_triangle_inequality(idx_h):
    rng = random.Random(72)
    dom = idx_h.domain
    for _ in range(15):
        a = random_interior_point(dom, rng)
        b = random_interior_point(dom, rng)
        c = random_interior_point(dom, rng)
        dab = query(idx_h, a, b).distance
        dbc = query(idx_h, b, c).distance
        dac = query(idx_h, a, c).distance
        assert dac <= dab + dbc


def test_query_lower_bound_is_l1(idx_h):
    rng = random.Random(73)
    dom = idx_h.domain
    for _ in range(25):
        s = random_interior_point(dom, rng)
        t = random_interior_point(dom, rng)
        assert query(idx_h, s, t).distance >= l1(s, t)


def test_query_deterministic(idx_h):
    s, t = pt(5, 25), pt(35, 26)
    r1 = query(idx_h, s, t)
    r2 = query(idx_h, s, t)
    assert r1.distance == r2.distance
    assert r1.path == r2.path
    assert r1.via == r2.via
    assert r1.counters.as_dict() == r2.counters.as_dict()
    # a fresh index gives the same answer (build is deterministic too)
    r3 = query(build_index(fixtures.fix_h()), s, t)
    assert (r3.distance, r3.path, r3.via) == (r1.distance, r1.path, r1.via)


def test_counters_populated(idx_h):
    r = query(idx_h, pt(5, 25), pt(35, 26))
    d = r.counters.as_dict()
    assert set(d) == {"coupled_evals", "stair_steps", "merge_comparisons",
                      "recursion_depth"}
    assert d["coupled_evals"] > 0
    assert all(v >= 0 for v in d.values())


def test_recursion_depth_logarithmic():
    rng = random.Random(55)
    for _ in range(4):
        dom = random_domain(rng, n_outer=rng.randrange(16, 28),
                            n_holes=rng.randrange(1, 4))
        idx = build_index(dom)
        cap = 2 * (1 + math.ceil(math.log2(idx.graph.num_vertices + 1)))
        for _ in range(10):
            s = random_interior_point(dom, rng)
            t = random_interior_point(dom, rng)
            r = query(idx, s, t)
            assert r.counters.recursion_depth <= cap


def test_baseline_path_valid(idx_h):
    rng = random.Random(90)
    dom = idx_h.domain
    for _ in range(20):
        s = random_interior_point(dom, rng)
        t = random_interior_point(dom, rng)
        b = baseline_query(idx_h, s, t)
        assert b.path[0] == s and b.path[-1] == t
        _check_path(dom, b, b.distance)
