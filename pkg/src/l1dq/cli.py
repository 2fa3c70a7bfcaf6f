"""Command-line surface: build/persist an index, answer queries, fuzz
against the brute-force oracle, benchmark work counters, render SVG debug
views.

Exit codes: 0 success, 2 domain validation failure (build), 3 query point
outside the domain, 4 fuzz/self-check mismatch.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import random
import sys
from fractions import Fraction

from . import regions
from .dcquery import baseline_query, build_index, query
from .gateways import compute_gateways, trivial_path_check
from .geom import (
    GeometryError,
    Point,
    PointOutsideDomain,
    coord_str,
    is_visible,
    l1,
    l1_length,
    parse_coord,
    pt,
    validate_domain,
)
from .oracle import oracle_distance
from .persist import IndexFormatError, load_index, save_index
from .randgen import random_domain, random_interior_point
from .regions import FRAMES, build_region_s, build_region_t, \
    prune_trailing_equal_y


# ---------------------------------------------------------------------------
# shared plumbing

def _fail(code: int, **payload) -> int:
    print(json.dumps(payload), file=sys.stderr)
    return code


def _parse_point(text: str) -> Point:
    parts = text.strip().lstrip("(").rstrip(")").split(",")
    if len(parts) != 2:
        raise ValueError(f"expected 'x,y', got {text!r}")
    return pt(parse_coord(parts[0].strip()), parse_coord(parts[1].strip()))


def _load_domain_file(path: str):
    with open(path) as f:
        data = json.load(f)
    outer = [tuple(v) for v in data["outer"]]
    holes = [[tuple(v) for v in ring] for ring in data.get("holes", [])]
    return validate_domain(outer, holes)


def _domain_json(domain) -> dict:
    return {"outer": [[int(p.x), int(p.y)] for p in domain.outer],
            "holes": [[[int(p.x), int(p.y)] for p in ring]
                      for ring in domain.holes]}


def _dedup(seq):
    out, seen = [], set()
    for x in seq:
        if x not in seen:
            seen.add(x)
            out.append(x)
    return out


def _gateway_counts(index, s: Point, t: Point):
    gs = compute_gateways(index.domain, index.graph, s, role="s")
    gt = compute_gateways(index.domain, index.graph, t, role="t")
    return (len(_dedup(gs.all_ids() + gs.direct)),
            len(_dedup(gt.all_ids() + gt.direct)))


def _result_json(res, want_path: bool, want_counters: bool) -> dict:
    out = {"dist": coord_str(res.distance)}
    if want_path:
        out["path"] = [p.as_json() for p in res.path]
    out["via"] = list(res.via) if res.via is not None else None
    if want_counters:
        out["counters"] = res.counters.as_dict()
    return out


# ---------------------------------------------------------------------------
# build

def cmd_build(args) -> int:
    try:
        domain = _load_domain_file(args.domain)
    except (OSError, json.JSONDecodeError, KeyError, TypeError) as e:
        return _fail(2, error="parse", detail=str(e))
    except GeometryError as e:
        return _fail(2, error=e.code, detail=str(e))
    index = build_index(domain, variant=args.variant, materialize=True)
    out = args.out or args.domain + ".idx"
    save_index(index, out)
    print(json.dumps({
        "n": domain.n, "h": domain.h,
        "graph_vertices": index.graph.num_vertices,
        "graph_edges": index.graph.num_edges,
        "tables": len(index.tables.trees),
        "index": out,
    }))
    return 0


# ---------------------------------------------------------------------------
# query

def cmd_query(args) -> int:
    try:
        index = load_index(args.index)
    except (OSError, IndexFormatError, GeometryError) as e:
        return _fail(2, error="index", detail=str(e))
    try:
        s, t = _parse_point(args.s), _parse_point(args.t)
    except ValueError as e:
        return _fail(3, error="point", detail=str(e))
    try:
        res = query(index, s, t)
    except PointOutsideDomain as e:
        return _fail(3, error=e.code, detail=str(e))
    out = _result_json(res, args.path, args.counters)
    if args.baseline:
        base = baseline_query(index, s, t)
        out["baseline"] = _result_json(base, False, args.counters)
        out["agreement"] = base.distance == res.distance
    print(json.dumps(out))
    if args.baseline and not out["agreement"]:
        return 4
    return 0


# ---------------------------------------------------------------------------
# fuzz / bench

def _check_query(index, s: Point, t: Point, with_oracle: bool):
    """One fuzz probe: triple agreement, path validity, work bound, and
    the strict-monotonicity cleanup invariant of every R(t) piece.
    Returns None when clean, else a failure-description dict."""
    domain = index.domain
    res = query(index, s, t)
    base = baseline_query(index, s, t)
    if res.distance != base.distance:
        return {"reason": "dc-vs-baseline", "dc": coord_str(res.distance),
                "baseline": coord_str(base.distance)}
    if with_oracle:
        d0 = oracle_distance(domain, s, t)
        if res.distance != d0:
            return {"reason": "dc-vs-oracle", "dc": coord_str(res.distance),
                    "oracle": coord_str(d0)}
    if l1_length(list(res.path)) != res.distance:
        return {"reason": "path-length"}
    for a, b in zip(res.path, res.path[1:]):
        if not is_visible(domain, a, b):
            return {"reason": "path-visibility",
                    "segment": [a.as_json(), b.as_json()]}
    ns, nt = _gateway_counts(index, s, t)
    bound = 8 * (ns + nt * (1 + math.ceil(math.log2(ns + 1)))) + nt + 8
    if res.counters.coupled_evals > bound:
        return {"reason": "work-bound",
                "coupled_evals": res.counters.coupled_evals, "bound": bound}
    gt = compute_gateways(domain, index.graph, t, role="t")
    rt = build_region_t(domain, index.graph, t, gt)
    for quad, piece in rt.pieces.items():
        xs = [p.x for p in piece.gateways]
        ys = [p.y for p in piece.gateways]
        if xs != sorted(set(xs)) or ys != sorted(set(ys), reverse=True):
            return {"reason": "region-t-ordering", "quadrant": quad}
    return None


def _probe(domain, s: Point, t: Point, variant: str, with_oracle: bool):
    try:
        return _check_query(build_index(domain, variant), s, t, with_oracle)
    except Exception as e:  # a crash is a failure too
        return {"reason": "exception", "detail": f"{type(e).__name__}: {e}"}


def _minimize(domain, s, t, variant, with_oracle):
    """Drop holes one at a time while the failure persists."""
    holes = list(domain.holes)
    changed = True
    while changed:
        changed = False
        for i in range(len(holes)):
            trial = holes[:i] + holes[i + 1:]
            try:
                cand = validate_domain(domain.outer, trial)
            except GeometryError:
                continue
            if _probe(cand, s, t, variant, with_oracle) is not None:
                domain, holes = cand, trial
                changed = True
                break
    return domain


def _fuzz_domains(rng: random.Random, count: int, max_n: int, max_h: int):
    for _ in range(count):
        n_outer = rng.randrange(8, max(9, min(max_n, 26)))
        n_holes = rng.randrange(0, max_h + 1)
        yield random_domain(rng, n_outer=n_outer, n_holes=n_holes)


def _fuzz_points(domain, rng: random.Random):
    den = rng.choice([1, 1, 2, 4])
    return (random_interior_point(domain, rng, denominator=den),
            random_interior_point(domain, rng, denominator=den))


def _inject_fault(kind: str) -> None:
    if kind == "skip-cleanup":
        # disable the duplicate-coordinate gateway cleanup of R(t); the
        # fuzz ordering invariant must then catch the stale duplicates
        regions._cleanup = lambda entries, t: (list(entries), {})
    else:
        raise ValueError(f"unknown fault {kind!r}")


def cmd_fuzz(args) -> int:
    if args.inject_fault:
        _inject_fault(args.inject_fault)
    rng = random.Random(args.seed)
    ran = 0
    for domain in _fuzz_domains(rng, args.domains, args.max_n, args.max_h):
        try:
            index = build_index(domain, args.variant)
        except Exception as e:
            failure = {"reason": "exception",
                       "detail": f"{type(e).__name__}: {e}"}
            index = None
        for _ in range(args.queries):
            if index is not None:
                s, t = _fuzz_points(domain, rng)
                try:
                    failure = _check_query(index, s, t, with_oracle=True)
                except Exception as e:
                    failure = {"reason": "exception",
                               "detail": f"{type(e).__name__}: {e}"}
            else:
                s = t = pt(0, 0)
            if failure is not None:
                small = _minimize(domain, s, t, args.variant,
                                  with_oracle=True)
                repro = {"domain": _domain_json(small),
                         "s": s.as_json(), "t": t.as_json(),
                         "seed": args.seed, "variant": args.variant,
                         "failure": failure}
                with open(args.reproducer, "w") as f:
                    json.dump(repro, f, indent=1)
                print(json.dumps({"status": "mismatch", "queries": ran,
                                  "failure": failure,
                                  "reproducer": args.reproducer}))
                return 4
            ran += 1
    print(json.dumps({"status": "ok", "domains": args.domains,
                      "queries": ran, "seed": args.seed}))
    return 0


def cmd_bench(args) -> int:
    rng = random.Random(args.seed)
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    writer = csv.writer(out)
    writer.writerow(["n_s", "n_t", "coupled_evals", "baseline_evals"])
    for domain in _fuzz_domains(rng, args.domains, args.max_n, args.max_h):
        index = build_index(domain, args.variant)
        for _ in range(args.queries):
            s, t = _fuzz_points(domain, rng)
            res = query(index, s, t)
            base = baseline_query(index, s, t)
            ns, nt = _gateway_counts(index, s, t)
            writer.writerow([ns, nt, res.counters.coupled_evals,
                             base.counters.coupled_evals])
    if args.out:
        out.close()
    return 0


# ---------------------------------------------------------------------------
# render

def _svg_pts(points) -> str:
    return " ".join(f"{float(p.x)},{float(p.y)}" for p in points)


def _region_s_shapes(index, s: Point) -> list:
    """Per-quadrant R(s) boundaries in real coordinates; a degenerate
    single-gateway region renders as the segment from s to its gateway."""
    gs = compute_gateways(index.domain, index.graph, s, role="s")
    shapes = []
    for quad, lst in gs.quadrants.items():
        frame = FRAMES[quad]
        canon = [(g, frame.to_canon(index.graph.verts[g].location))
                 for _, g in lst]
        pruned = prune_trailing_equal_y(canon)
        if not pruned:
            continue
        if len(pruned) == 1:
            g = frame.from_canon(pruned[0][1])
            shapes.append(("line", [s, g]))
            continue
        rs = build_region_s(index.domain, frame, pruned)
        ring = [frame.from_canon(p) for p in rs.boundary_canon()]
        shapes.append(("polyline", ring + [ring[0]]))
    return shapes


def cmd_render(args) -> int:
    try:
        index = load_index(args.index)
    except (OSError, IndexFormatError, GeometryError) as e:
        return _fail(2, error="index", detail=str(e))
    try:
        s, t = _parse_point(args.s), _parse_point(args.t)
        res = query(index, s, t)
    except (ValueError, PointOutsideDomain) as e:
        return _fail(3, error=getattr(e, "code", "point"), detail=str(e))
    domain = index.domain
    trivial = trivial_path_check(domain, index.decomps, s, t) is not None

    xs = [float(p.x) for p in domain.vertices]
    ys = [float(p.y) for p in domain.vertices]
    pad = 2.0
    x0, y0 = min(xs) - pad, min(ys) - pad
    w, h = max(xs) - x0 + pad, max(ys) - y0 + pad
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="{x0} {-(y0 + h)} {w} {h}">',
        '<g transform="scale(1,-1)" stroke-linejoin="round">',
        f'<polygon points="{_svg_pts(domain.outer)}" '
        'fill="#f4f4f4" stroke="black" stroke-width="0.3"/>',
    ]
    for ring in domain.holes:
        lines.append(f'<polygon points="{_svg_pts(ring)}" '
                     'fill="#cccccc" stroke="black" stroke-width="0.3"/>')

    lines.append('<g id="Rs" stroke="#1f77b4" fill="none" '
                 'stroke-width="0.25">')
    if not trivial:
        for kind, ps in _region_s_shapes(index, s):
            if kind == "line":
                lines.append(f'<line x1="{float(ps[0].x)}" '
                             f'y1="{float(ps[0].y)}" x2="{float(ps[1].x)}" '
                             f'y2="{float(ps[1].y)}"/>')
            else:
                lines.append(f'<polyline points="{_svg_pts(ps)}"/>')
    lines.append('</g>')

    if not trivial:
        gt = compute_gateways(domain, index.graph, t, role="t")
        rt = build_region_t(domain, index.graph, t, gt)
        lines.append('<g id="Rt" stroke="#d62728" fill="none" '
                     'stroke-width="0.25">')
        for ring in rt.boundary_real():
            lines.append(f'<polyline points="{_svg_pts(ring + ring[:1])}"/>')
        for a, b, _g in rt.transparent_real():
            lines.append(f'<line x1="{float(a.x)}" y1="{float(a.y)}" '
                         f'x2="{float(b.x)}" y2="{float(b.y)}" '
                         'stroke-dasharray="1,1"/>')
        for _gid, p in rt.vt_ccw:
            lines.append(f'<circle cx="{float(p.x)}" cy="{float(p.y)}" '
                         'r="0.4" fill="#d62728" stroke="none"/>')
        lines.append('</g>')

    lines.append('<g id="path" stroke="#2ca02c" fill="none" '
                 'stroke-width="0.4">')
    lines.append(f'<polyline points="{_svg_pts(res.path)}"/>')
    for p in (s, t):
        lines.append(f'<circle cx="{float(p.x)}" cy="{float(p.y)}" '
                     'r="0.5" fill="#2ca02c" stroke="none"/>')
    lines.append('</g>')
    lines.append('</g>')
    lines.append('</svg>')
    with open(args.out, "w") as f:
        f.write("\n".join(lines) + "\n")
    print(json.dumps({"out": args.out, "dist": coord_str(res.distance),
                      "trivial": trivial}))
    return 0


# ---------------------------------------------------------------------------

def _add_gen_args(p) -> None:
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--domains", type=int, default=20)
    p.add_argument("--queries", type=int, default=20)
    p.add_argument("--max-n", type=int, default=60)
    p.add_argument("--max-h", type=int, default=6)
    p.add_argument("--variant", choices=("G", "G1"), default="G")
    p.add_argument("--jobs", type=int, default=1,
                   help="accepted for compatibility; runs sequentially")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="l1dq",
        description="Exact two-point L1 shortest-path queries in polygonal "
                    "domains with holes.")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("build", help="validate a domain and persist an index")
    p.add_argument("domain", help="domain JSON file {outer, holes}")
    p.add_argument("--variant", choices=("G", "G1"), default="G")
    p.add_argument("-o", "--out", help="index output path (default: +.idx)")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("query", help="answer one two-point query")
    p.add_argument("index")
    p.add_argument("s", help="source point 'x,y' (rational 'p/q' allowed)")
    p.add_argument("t", help="target point 'x,y'")
    p.add_argument("--path", action="store_true")
    p.add_argument("--counters", action="store_true")
    p.add_argument("--baseline", action="store_true",
                   help="also run the quadratic scan and report agreement")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("fuzz", help="random domains: query vs baseline "
                                    "vs oracle plus invariant checks")
    _add_gen_args(p)
    p.add_argument("--reproducer", default="fuzz_reproducer.json")
    p.add_argument("--inject-fault", choices=("skip-cleanup",),
                   help="deliberately break an internal step "
                        "(harness self-test)")
    p.set_defaults(func=cmd_fuzz)

    p = sub.add_parser("bench", help="fuzz without the oracle; CSV of "
                                     "work counters")
    _add_gen_args(p)
    p.add_argument("-o", "--out", help="CSV output path (default stdout)")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("render", help="SVG debug view of a query")
    p.add_argument("index")
    p.add_argument("s")
    p.add_argument("t")
    p.add_argument("out", help="output SVG path")
    p.set_defaults(func=cmd_render)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
