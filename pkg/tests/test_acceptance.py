"""Acceptance gate: one test (one pass/fail line under ``pytest -v``) per
top-level acceptance criterion.  Everything is exact-rational and
counter-based; no tolerances anywhere.

Run: python3 -m pytest tests/test_acceptance.py -v
"""

import csv
import math
import random
import subprocess
import sys
import time

import pytest

from l1dq import fixtures
from l1dq.dcquery import baseline_query, build_index, query
from l1dq.gateways import compute_gateways
from l1dq.geom import (
    PreconditionViolated,
    is_visible,
    l1,
    l1_length,
    pt,
    segments_properly_cross,
    validate_domain,
)
from l1dq.graph import build_graph, graph_dijkstra
from l1dq.oracle import oracle_all_from, oracle_distance
from l1dq.prep import (
    build_source_tree,
    clockwise_from,
    clockwise_from_slow,
)
from l1dq.randgen import random_domain, random_interior_point
from l1dq.regions import (
    FRAMES,
    build_region_s,
    build_region_t,
    prune_trailing_equal_y,
    region_s_intersects_region_t,
    rt_contains_vs_gateway,
    validate_region_s,
    validate_region_t,
)


def _dedup(seq):
    out, seen = [], set()
    for x in seq:
        if x not in seen:
            seen.add(x)
            out.append(x)
    return out


def _corpus_domains(rng, count, small_hi=16, mid=0, large=0):
    """Random general-position domains, mostly small, a few larger."""
    doms = []
    for _ in range(count - mid - large):
        doms.append(random_domain(rng, n_outer=rng.randrange(8, small_hi),
                                  n_holes=rng.randrange(0, 4)))
    for _ in range(mid):
        doms.append(random_domain(rng, n_outer=rng.randrange(16, 24),
                                  n_holes=rng.randrange(1, 5)))
    for _ in range(large):
        doms.append(random_domain(rng, n_outer=rng.randrange(24, 31),
                                  n_holes=rng.randrange(4, 7)))
    return doms


@pytest.fixture(scope="module")
def corpus():
    """Shared fuzz corpus with full per-query artifacts for criteria
    2, 4, 5 (bound part), 6 and 7."""
    rng = random.Random(20260824)
    records = []
    for dom in _corpus_domains(rng, 30, mid=3, large=1):
        idx = build_index(dom)
        for _ in range(15):
            den = rng.choice([1, 1, 2, 4])
            s = random_interior_point(dom, rng, denominator=den)
            t = random_interior_point(dom, rng, denominator=den)
            res = query(idx, s, t)
            gs = compute_gateways(dom, idx.graph, s, role="s")
            gt = compute_gateways(dom, idx.graph, t, role="t")
            rt = build_region_t(dom, idx.graph, t, gt)
            d0 = oracle_distance(dom, s, t)
            records.append((dom, idx, s, t, res, d0, gs, gt, rt))
    return records


def _region_s_quadrants(domain, graph, gs):
    out = {}
    for quad, lst in gs.quadrants.items():
        frame = FRAMES[quad]
        canon = [(g, frame.to_canon(graph.verts[g].location))
                 for _, g in lst]
        pruned = prune_trailing_equal_y(canon)
        if pruned:
            out[quad] = build_region_s(domain, frame, pruned)
    return out


def test_criterion_01_oracle_equivalence():
    """200 domains (n <= 60, h <= 6) x 50 queries: dc == baseline == oracle
    exactly, inside the five-minute budget."""
    rng = random.Random(1)
    start = time.time()
    checked = 0
    for dom in _corpus_domains(rng, 200, mid=10, large=3):
        assert dom.n <= 60 and dom.h <= 6
        idx = build_index(dom)
        for _ in range(50):
            den = rng.choice([1, 1, 2, 4])
            s = random_interior_point(dom, rng, denominator=den)
            t = random_interior_point(dom, rng, denominator=den)
            d0 = oracle_distance(dom, s, t)
            assert query(idx, s, t).distance == d0, (s, t)
            assert baseline_query(idx, s, t).distance == d0, (s, t)
            checked += 1
    elapsed = time.time() - start
    assert checked == 200 * 50
    assert elapsed <= 300, f"ran {elapsed:.0f}s, budget 300s"


def test_criterion_02_path_validity(corpus):
    for dom, _idx, s, t, res, d0, *_ in corpus:
        assert res.path[0] == s and res.path[-1] == t
        assert l1_length(list(res.path)) == res.distance == d0
        for a, b in zip(res.path, res.path[1:]):
            assert is_visible(dom, a, b), (s, t, a, b)


def test_criterion_03_path_preserving_graph():
    """Exhaustive vertex pairs on small domains: distance inside the graph
    equals the oracle distance."""
    rng = random.Random(33)
    doms = [fixtures.fix_e(), fixtures.fix_h()]
    while len(doms) < 7:
        d = random_domain(rng, n_outer=rng.randrange(8, 14),
                          n_holes=rng.randrange(0, 3))
        if d.n <= 20:
            doms.append(d)
    for dom in doms:
        graph = build_graph(dom, "G")
        for vid, gid in enumerate(graph.vertex_gid):
            gdist = graph_dijkstra(graph, gid)
            run = oracle_all_from(dom, dom.vertices[vid], [])
            for wid, wgid in enumerate(graph.vertex_gid):
                assert gdist[wgid] == run.vertex_dist[wid], (vid, wid)


def test_criterion_04_gateway_bounds(corpus):
    from l1dq.gateways import projection_cutlines

    for dom, idx, s, t, _res, _d0, gs, gt, _rt in corpus:
        cap = math.ceil(math.log2(dom.n)) + 1
        for gset, p in ((gs, s), (gt, t)):
            assert len(gset.v1) <= 8
            for side in ("left", "right"):
                nodes = projection_cutlines(dom, idx.graph.tree, p, side)
                assert len(nodes) <= cap, (p, side)
    # G1 target-side gateways: relevant cut-lines per side bounded by the
    # number of super-levels of the cut-line tree
    rng = random.Random(44)
    for _ in range(3):
        dom = random_domain(rng, n_outer=12, n_holes=1)
        graph = build_graph(dom, "G1")
        levels = graph.tree.num_super_levels
        for _ in range(10):
            t = random_interior_point(dom, rng)
            gt = compute_gateways(dom, graph, t, role="t")
            lines = {graph.tree.node(nid).line for nid, _ in gt.v2}
            left = {ln for ln in lines if ln <= t.x}
            right = lines - left
            assert len(left) <= levels and len(right) <= levels


def _comb_domain(k):
    """A long corridor with k teeth, a clear mid-band for cut-line
    visibility, and one tall tooth near the right end that forces a
    non-monotone geodesic."""
    H = 120 + 6 * k
    tall = k - 2
    bot = [(0, 0)]
    for i in range(k):
        x0 = 10 + 30 * i
        tip = (H - 4 * k - 10) if i == tall else (2 * k + 8 + 2 * i)
        bot += [(x0, 3 + 2 * i), (x0 + 10, tip), (x0 + 20, 4 + 2 * i)]
    L = 30 * k + 20
    bot.append((L, 1))
    top = [(L + 1, H)]
    for i in reversed(range(k)):
        x0 = 25 + 30 * i
        top += [(x0 + 19, H - 3 - 2 * i), (x0 + 9, H - 2 * k - 8 - 2 * i),
                (x0 - 1, H - 4 - 2 * i)]
    top.append((1, H - 1))
    return validate_domain(bot + top)


def test_criterion_05_subquadratic_work(corpus, tmp_path):
    # work bound on every corpus query
    for dom, idx, s, t, res, _d0, gs, gt, _rt in corpus:
        ns = len(_dedup(gs.all_ids() + gs.direct))
        nt = len(_dedup(gt.all_ids() + gt.direct))
        bound = 8 * (ns + nt * (1 + math.ceil(math.log2(ns + 1)))) + nt + 8
        assert res.counters.coupled_evals <= bound, (s, t)
    # corridor family: both gateway sets >= 8 and the baseline/dc counter
    # ratio grows with n_s
    rows = []
    for k in (4, 8, 16, 24, 32):
        dom = _comb_domain(k)
        idx = build_index(dom)
        mid = (120 + 6 * k) // 2
        s, t = pt(2, mid), pt(30 * k + 18, mid + 1)
        res = query(idx, s, t)
        base = baseline_query(idx, s, t)
        assert res.distance == base.distance
        gs = compute_gateways(dom, idx.graph, s, role="s")
        gt = compute_gateways(dom, idx.graph, t, role="t")
        ns = len(_dedup(gs.all_ids() + gs.direct))
        nt = len(_dedup(gt.all_ids() + gt.direct))
        assert ns >= 8 and nt >= 8
        rows.append((ns, nt, res.counters.coupled_evals,
                     base.counters.coupled_evals))
    out = tmp_path / "corridor_bench.csv"
    with open(out, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["n_s", "n_t", "coupled_evals", "baseline_evals"])
        w.writerows(rows)
    with open(out) as f:
        data = list(csv.DictReader(f))
    ratios = [int(r["baseline_evals"]) / int(r["coupled_evals"])
              for r in data]
    ns_vals = [int(r["n_s"]) for r in data]
    assert ns_vals[-1] > ns_vals[0]
    # growing trend: later half strictly above earlier half on average
    half = len(ratios) // 2
    assert sum(ratios[half:]) / (len(ratios) - half) \
        > sum(ratios[:half]) / half
    assert ratios[-1] > ratios[0]


def test_criterion_06_region_invariants(corpus):
    for dom, idx, s, _t, _res, _d0, gs, _gt, rt in corpus:
        for quad, rs in _region_s_quadrants(dom, idx.graph, gs).items():
            # R(s) inside P, consecutive staircase positions (validator),
            # and no domain vertex strictly inside
            assert validate_region_s(dom, rs), (s, quad)
            for v in dom.vertices:
                assert not rs.interior_contains_canon(rs.frame.to_canon(v))
        assert validate_region_t(dom, rt, idx.graph)
        for piece in rt.pieces.values():
            xs = [p.x for p in piece.gateways]
            ys = [p.y for p in piece.gateways]
            assert xs == sorted(xs) and len(set(xs)) == len(xs)
            assert ys == sorted(ys, reverse=True) and len(set(ys)) == len(ys)


def test_criterion_07_containment_dichotomy(corpus):
    hits = misses = 0
    for dom, idx, s, _t, _res, d0, gs, _gt, rt in corpus:
        vs = [(g, idx.graph.verts[g].location) for g in gs.all_ids()]
        hit, counter = rt_contains_vs_gateway(rt, vs)
        assert counter <= len(vs) + len(rt.vt_ccw) + 8
        if hit is not None:
            hits += 1
            _gid, p, strict = hit
            val = l1(s, p) + l1(p, rt.t)
            if strict:
                assert val == d0, (s, rt.t, p)
            else:
                assert val >= d0, (s, rt.t, p)
        else:
            misses += 1
            for rs in _region_s_quadrants(dom, idx.graph, gs).values():
                assert not region_s_intersects_region_t(rs, rt)
    assert hits > 0 and misses > 0


def test_criterion_08_spt_planarity_and_clockwise():
    rng = random.Random(88)
    doms = [fixtures.fix_h()]
    while len(doms) < 4:
        d = random_domain(rng, n_outer=rng.randrange(8, 11),
                          n_holes=rng.randrange(0, 2))
        if d.n <= 12:
            doms.append(d)
    compared = 0
    for dom in doms:
        graph = build_graph(dom, "G")
        nv = graph.num_vertices
        for src in range(nv):
            tree = build_source_tree(graph, src)
            edges = [(tree.graph.verts[tree.parent[v]].location,
                      tree.graph.verts[v].location)
                     for v in range(nv) if tree.parent[v] is not None]
            for i in range(len(edges)):
                for j in range(i + 1, len(edges)):
                    assert not segments_properly_cross(*edges[i], *edges[j])
            # fast cyclic-array comparator vs geometric arbiter
            kids = tree.children.get(src, [])
            if not kids:
                continue
            refs = [graph.verts[k].location for k in kids[:2]]
            for _ in range(6):
                v1 = rng.randrange(nv)
                v2 = rng.randrange(nv)
                for ref in refs:
                    try:
                        fast = clockwise_from(tree, ref, v1, v2)
                        slow = clockwise_from_slow(tree, ref, v1, v2)
                    except PreconditionViolated:
                        continue
                    assert fast == slow, (src, v1, v2, ref)
                    compared += 1
    assert compared > 100


def test_criterion_09_determinism(tmp_path):
    args = [sys.executable, "-m", "l1dq.cli", "fuzz", "--seed", "5",
            "--domains", "2", "--queries", "4", "--max-n", "14",
            "--max-h", "2"]
    r1 = subprocess.run(args, capture_output=True, cwd=tmp_path)
    r2 = subprocess.run(args, capture_output=True, cwd=tmp_path)
    assert r1.returncode == r2.returncode == 0
    assert r1.stdout == r2.stdout
    bargs = [sys.executable, "-m", "l1dq.cli", "bench", "--seed", "5",
             "--domains", "2", "--queries", "4", "--max-n", "14",
             "--max-h", "2"]
    b1 = subprocess.run(bargs, capture_output=True, cwd=tmp_path)
    b2 = subprocess.run(bargs, capture_output=True, cwd=tmp_path)
    assert b1.returncode == b2.returncode == 0
    assert b1.stdout == b2.stdout
