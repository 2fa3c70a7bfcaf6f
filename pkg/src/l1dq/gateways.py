"""Per-query-point machinery: projection cut-lines, gateway sets, and
trivial-shortest-path detection.

A query point q is "inserted" into the path-preserving graph through a
small set of *gateways*:

* V1 gateways: for each of q's four boundary projections, the two graph
  vertices adjacent to the projection on its boundary edge (or the
  projection itself when it already is a graph vertex) — at most eight,
* V2 gateways: walking the cut-line tree from the root toward q's leaf,
  every cut-line q is horizontally visible to is a *projection cut-line*;
  on each, the Steiner point immediately above and the one immediately
  below q's horizontal projection are gateways when they are visible to
  the projection point along the cut-line.

For the G1 variant the t side uses, per super-level and side, only the
closest projection cut-line (the *relevant* one); the s side is computed
with respect to type-2 Steiner points only, exactly as for G.
"""
from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .geom import (
    DOWN,
    LEFT,
    RIGHT,
    UP,
    Decompositions,
    Point,
    PolygonalDomain,
    axis_projection,
    horizontally_visible,
    is_visible,
    l1,
    l1_length,
)
from .graph import TYPE2, TYPE3, POLY_VERTEX, TYPE1, CutLineTree, PathGraph


# ---------------------------------------------------------------------------
# projection cut-lines

def projection_cutlines(domain: PolygonalDomain, tree: CutLineTree, p: Point,
                        side: Optional[str] = None) -> list:
    """Cut-line tree nodes on the root-to-leaf walk toward p that p is
    horizontally visible to; optionally filtered to one side of p.

    A cut-line through p itself counts as the left side (fixed tie rule).
    """
    out = []
    node = tree.node(tree.root)
    while True:
        if horizontally_visible(domain, p, node.line) is not None:
            node_side = LEFT if node.line <= p.x else RIGHT
            if side is None or side == node_side:
                out.append(node)
        if node.is_leaf:
            break
        node = tree.node(node.left if p.x <= node.line else node.right)
    return out


def points_on_cutline(graph: PathGraph, node_id: int,
                      kinds: Optional[frozenset] = None) -> list:
    """Graph ids hosted on a cut-line, sorted by y, optionally filtered to
    the given Steiner kinds."""
    ids = graph.cutline_points[node_id]
    if kinds is None:
        return ids
    out = []
    for i in ids:
        if any(t.kind in kinds and t.host == node_id
               for t in graph.verts[i].tags):
            out.append(i)
    return out


# ---------------------------------------------------------------------------
# gateway sets

@dataclass
class GatewaySet:
    """All gateways of one query point."""

    owner: Point
    v1: list                         # graph ids, at most 8
    v2: list                         # [(cut-node id, graph id)] sorted by line
    quadrants: Dict[int, list]       # quadrant (1..4) -> [(node id, graph id)]
    direct: list = field(default_factory=list)  # graph ids scanned exhaustively
    n_v2: int = 0

    def all_ids(self) -> list:
        seen = []
        for g in self.v1 + [g for _, g in self.v2]:
            if g not in seen:
                seen.append(g)
        return seen


def _v1_for_projection(graph: PathGraph, q: Point, edge_idx: int) -> list:
    """The projection point itself if it is a graph vertex, else the two
    graph vertices adjacent to it along the containing boundary edge."""
    exact = graph.loc2id.get(q)
    if exact is not None:
        return [exact]
    e = graph.domain.edges[edge_idx]
    ids = graph.edge_points[edge_idx]
    keys = [l1(e.a, graph.verts[i].location) for i in ids]
    k = bisect.bisect_left(keys, l1(e.a, q))
    out = []
    if k - 1 >= 0:
        out.append(ids[k - 1])
    if k < len(ids):
        out.append(ids[k])
    return out


def _gateways_on_cutline(domain: PolygonalDomain, graph: PathGraph,
                         node_id: int, line, p: Point,
                         kinds: Optional[frozenset]) -> list:
    """Immediately-above/-below Steiner points on a projection cut-line,
    kept when visible (along the cut-line) to the horizontal projection."""
    s_prime = Point(line, p.y)
    ids = points_on_cutline(graph, node_id, kinds)
    ys = [graph.verts[i].location.y for i in ids]
    k = bisect.bisect_left(ys, p.y)
    picks = []
    if k < len(ids):
        picks.append(ids[k])          # immediately above (or at) s'
    if k - 1 >= 0:
        picks.append(ids[k - 1])      # immediately below s'
    out = []
    for g in picks:
        gloc = graph.verts[g].location
        if is_visible(domain, s_prime, gloc):
            out.append(g)
    return out


def _quadrant_of(owner: Point, line, gloc: Point) -> int:
    """Quadrant of a cut-line gateway.  Coordinate ties are resolved as if
    the owner were displaced by (+eps, +eps^2): a cut-line through the
    owner counts as left, a gateway at the owner's ordinate as below."""
    above = gloc.y > owner.y
    if above:
        return 1 if line > owner.x else 2
    return 4 if line > owner.x else 3


def compute_gateways(domain: PolygonalDomain, graph: PathGraph, p: Point,
                     role: str = "s") -> GatewaySet:
    """Gateway set of a query point (role "s" or "t"; role matters for G1)."""
    domain.require_inside(p)
    tree = graph.tree
    variant = graph.variant

    v1: list = []
    for direction in (LEFT, RIGHT, UP, DOWN):
        q, edge_idx = axis_projection(domain, p, direction)
        for g in _v1_for_projection(graph, q, edge_idx):
            if g not in v1 and is_visible(domain, p, graph.verts[g].location):
                v1.append(g)

    if variant == "G1" and role == "t":
        cutnodes = _relevant_cutlines(domain, tree, p)
        kinds = None  # all Steiner points on the line (type-2 and type-3)
    else:
        cutnodes = projection_cutlines(domain, tree, p)
        kinds = frozenset({TYPE2, POLY_VERTEX}) if variant == "G1" else None

    v2: list = []
    for node in cutnodes:
        for g in _gateways_on_cutline(domain, graph, node.id, node.line, p,
                                      kinds):
            v2.append((node.id, g))

    quadrants: Dict[int, list] = {1: [], 2: [], 3: [], 4: []}
    direct: list = []
    for node_id, g in v2:
        line = tree.node(node_id).line
        quad = _quadrant_of(p, line, graph.verts[g].location)
        quadrants[quad].append((node_id, g))
    for quad, lst in quadrants.items():
        outward = 1 if quad in (1, 4) else -1
        lst.sort(key=lambda ng: outward * tree.node(ng[0]).line)
        # enforce the staircase order outward: a gateway rising back toward
        # the horizontal line through p breaks the envelope and is scanned
        # exhaustively instead
        kept: list = []
        for node_id, g in lst:
            y = graph.verts[g].location.y
            if kept:
                last_y = graph.verts[kept[-1][1]].location.y
                ok = y <= last_y if quad in (1, 2) else y >= last_y
            else:
                ok = True
            if ok:
                kept.append((node_id, g))
            elif g not in direct:
                direct.append(g)
        lst[:] = kept
    gs = GatewaySet(owner=p, v1=v1, v2=v2, quadrants=quadrants,
                    direct=direct, n_v2=len(v2))
    return gs


def _relevant_cutlines(domain: PolygonalDomain, tree: CutLineTree,
                       p: Point) -> list:
    """G1 t-side: per super-level and side, the closest projection cut-line."""
    walk = projection_cutlines(domain, tree, p)
    best: Dict[tuple, tuple] = {}
    for node in walk:
        side = LEFT if node.line <= p.x else RIGHT
        key = (node.super_level, side)
        dist = abs(node.line - p.x)
        cur = best.get(key)
        if cur is None or dist < cur[0]:
            best[key] = (dist, node)
    return [node for _, node in
            sorted(best.values(), key=lambda dn: dn[1].level)]


# ---------------------------------------------------------------------------
# trivial shortest paths

@dataclass(frozen=True)
class TrivialPath:
    """An xy-monotone shortest path of one of the four simple shapes."""

    polyline: tuple
    shape: str  # HV | VH | V-edge-H | H-edge-V | point

    @property
    def length(self):
        return l1_length(list(self.polyline))


def trivial_path_check(domain: PolygonalDomain, decomps: Decompositions,
                       s: Point, t: Point) -> Optional[TrivialPath]:
    """Detect a trivial shortest path: an L-shape (horizontal+vertical in
    either order) or a three-segment path s -> s' -> t' -> t whose middle
    segment lies on a single polygon edge.  Sound but only complete with
    respect to these four shapes."""
    domain.require_inside(s)
    domain.require_inside(t)
    if s == t:
        return TrivialPath((s,), "point")
    target = l1(s, t)

    # L-shapes
    c1 = Point(t.x, s.y)
    if domain.contains(c1) and is_visible(domain, s, c1) \
            and is_visible(domain, c1, t):
        poly = (s, t) if c1 in (s, t) else (s, c1, t)
        return TrivialPath(poly, "HV")
    c2 = Point(s.x, t.y)
    if domain.contains(c2) and is_visible(domain, s, c2) \
            and is_visible(domain, c2, t):
        poly = (s, t) if c2 in (s, t) else (s, c2, t)
        return TrivialPath(poly, "VH")

    # three-segment shapes via a shared polygon edge
    vdir_s = UP if t.y > s.y else DOWN
    hdir_s = RIGHT if t.x > s.x else LEFT
    vdir_t = UP if s.y > t.y else DOWN
    hdir_t = RIGHT if s.x > t.x else LEFT

    sp_v, se_v = axis_projection(domain, s, vdir_s)
    tp_h, te_h = axis_projection(domain, t, hdir_t)
    if se_v == te_h:
        poly = (s, sp_v, tp_h, t)
        if l1_length(list(poly)) == target:
            return TrivialPath(poly, "V-edge-H")
    sp_h, se_h = axis_projection(domain, s, hdir_s)
    tp_v, te_v = axis_projection(domain, t, vdir_t)
    if se_h == te_v:
        poly = (s, sp_h, tp_v, t)
        if l1_length(list(poly)) == target:
            return TrivialPath(poly, "H-edge-V")
    return None
