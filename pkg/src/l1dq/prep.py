"""Build-once preprocessing: per-source geodesic shortest-path trees over
the graph vertices, distance/last-edge tables, and the post-order cyclic
arrays used to compare two tree paths angularly.

For two graph vertices p, q the graph itself may not preserve the geodesic
distance d(p, q) in the domain, so each source tree is computed as a true
geodesic tree: Dijkstra over {source} ∪ polygon vertices ∪ graph vertices
where only the source and polygon vertices may appear as interior bends
(taut L1 paths bend only at polygon vertices).  Ties are broken by the
lexicographic key (L1 length, double-precision Euclidean length, vertex-id
sequence); the Euclidean component steers equal-L1 ties toward straighter
paths, which keeps the trees planar in practice.  A residual crossing pair
is repaired by exchanging the two child attachments when the exchange
preserves both distances; failure raises PlanarityRepairFailed.
"""
from __future__ import annotations

import functools
import heapq
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .geom import (
    Point,
    PlanarityRepairFailed,
    PreconditionViolated,
    is_visible,
    l1,
    norm,
    orient,
    segments_properly_cross,
)
from .graph import PathGraph


def _euclid(a: Point, b: Point) -> float:
    return math.hypot(float(b.x - a.x), float(b.y - a.y))


def _vg_adjacency(graph: PathGraph) -> List[list]:
    """vertex gid -> [(graph vid, L1 weight)] for all visible graph vertices.

    Cached on the graph object; this is the expensive per-domain step.
    """
    cached = getattr(graph, "_vg_adj", None)
    if cached is not None:
        return cached
    domain = graph.domain
    out: Dict[int, list] = {}
    for vgid in graph.vertex_gid:
        vloc = graph.verts[vgid].location
        lst = []
        for g in graph.verts:
            if g.id != vgid and is_visible(domain, vloc, g.location):
                lst.append((g.id, l1(vloc, g.location)))
        out[vgid] = lst
    graph._vg_adj = out
    return out


@dataclass
class SourceTree:
    """Geodesic shortest-path tree from one graph vertex to all others."""

    source: int                      # graph vid
    dist: list                       # gid -> exact distance
    parent: list                     # gid -> gid (source's parent is None)
    children: Dict[int, list]        # gid -> ordered child gids
    postorder: list                  # cyclic array L(q), root excluded
    pos: Dict[int, int]              # gid -> index in postorder
    graph: PathGraph

    def path(self, target: int) -> list:
        """Root-to-target vertex chain (graph vids)."""
        chain = [target]
        while chain[-1] != self.source:
            chain.append(self.parent[chain[-1]])
        chain.reverse()
        return chain

    def polyline(self, target: int) -> list:
        return [self.graph.verts[i].location for i in self.path(target)]

    def last_edge(self, target: int) -> Tuple[Point, Point]:
        """The tree edge incident to the target, as (predecessor, target)."""
        p = self.parent[target]
        return (self.graph.verts[p].location,
                self.graph.verts[target].location)


def _cw_cmp(ref: Point, origin: Point, graph: PathGraph):
    """Comparator ordering directions by clockwise angle from ``ref``.

    ``ref`` is a direction vector (as a Point); compared items are graph
    vids whose direction is origin -> vertex.  Exact integer/rational
    arithmetic; equal directions tie-break by distance then id.
    """
    zero = Point(0, 0)

    def klass(d: Point) -> int:
        c = ref.x * d.y - ref.y * d.x
        s = ref.x * d.x + ref.y * d.y
        if c == 0:
            return 0 if s > 0 else 2
        # clockwise offset in (0, pi) for c < 0, in (pi, 2pi) for c > 0
        return 1 if c < 0 else 3

    def cmp(i: int, j: int) -> int:
        a = graph.verts[i].location
        b = graph.verts[j].location
        da = Point(a.x - origin.x, a.y - origin.y)
        db = Point(b.x - origin.x, b.y - origin.y)
        ka, kb = klass(da), klass(db)
        if ka != kb:
            return -1 if ka < kb else 1
        cross = da.x * db.y - da.y * db.x
        if cross != 0:
            # same half-plane: smaller clockwise offset first
            return 1 if cross > 0 else -1
        # identical direction: nearer point first, then id
        la, lb = l1(origin, a), l1(origin, b)
        if la != lb:
            return -1 if la < lb else 1
        return -1 if i < j else (1 if i > j else 0)

    return cmp


def build_source_tree(graph: PathGraph, source: int) -> SourceTree:
    """Geodesic SPT from graph vertex ``source`` to every graph vertex."""
    domain = graph.domain
    verts = graph.verts
    nV = len(verts)
    sloc = verts[source].location
    vg_adj = _vg_adjacency(graph)
    expandable = set(graph.vertex_gid) | {source}

    # key per node: (L1, float-euclid, id-path)
    best: list = [None] * nV
    parent: list = [None] * nV
    best[source] = (0, 0.0, (source,))
    heap = [(0, 0.0, (source,), source)]
    while heap:
        d, eu, path, u = heapq.heappop(heap)
        if (d, eu, path) > best[u]:
            continue
        if u not in expandable:
            continue
        uloc = verts[u].location
        if u == source:
            out = vg_adj.get(u)
            if out is None:
                out = [(g.id, l1(sloc, g.location)) for g in verts
                       if g.id != u and is_visible(domain, sloc, g.location)]
        else:
            out = vg_adj[u]
        for v, w in out:
            key = (norm(d + w), eu + _euclid(uloc, verts[v].location),
                   path + (v,))
            if best[v] is None or key < best[v]:
                best[v] = key
                parent[v] = u
                heapq.heappush(heap, (*key, v))

    dist = [b[0] if b is not None else None for b in best]
    tree = SourceTree(source=source, dist=dist, parent=parent, children={},
                      postorder=[], pos={}, graph=graph)
    _repair_planarity(tree)
    _order_and_traverse(tree)
    return tree


def _tree_edges(tree: SourceTree) -> list:
    return [(tree.parent[v], v) for v in range(len(tree.parent))
            if tree.parent[v] is not None]


def _find_crossing(tree: SourceTree):
    """First properly-crossing pair of tree edges, via an x-interval sweep."""
    graph = tree.graph
    loc = lambda i: graph.verts[i].location
    edges = []
    for v in range(len(tree.parent)):
        p = tree.parent[v]
        if p is None:
            continue
        a, b = loc(p), loc(v)
        edges.append((min(a.x, b.x), max(a.x, b.x),
                      min(a.y, b.y), max(a.y, b.y), p, v))
    edges.sort(key=lambda e: e[0])
    active: list = []
    for x0, x1, y0, y1, p, v in edges:
        active = [e for e in active if e[1] >= x0]
        for _, _, oy0, oy1, op, ov in active:
            if oy1 < y0 or y1 < oy0:
                continue
            if len({p, v, op, ov}) < 4:
                continue
            if segments_properly_cross(loc(op), loc(ov), loc(p), loc(v)):
                return (op, ov, p, v)
        active.append((x0, x1, y0, y1, p, v))
    return None


def _repair_planarity(tree: SourceTree, max_rounds: Optional[int] = None) -> None:
    """Exchange child attachments of properly-crossing tree edges.

    Both reattachments must preserve the exact distances (guaranteed for
    genuine equal-length ties) and stay inside the domain.
    """
    graph = tree.graph
    domain = graph.domain
    loc = lambda i: graph.verts[i].location
    rounds = 0
    limit = max_rounds if max_rounds is not None else len(graph.verts)
    while True:
        crossing = _find_crossing(tree)
        if crossing is None:
            return
        if rounds >= limit:
            raise PlanarityRepairFailed("crossing tree edges not repairable")
        rounds += 1
        a1, u, a2, v = crossing
        ok_u = (tree.dist[a2] + l1(loc(a2), loc(u)) == tree.dist[u]
                and is_visible(domain, loc(a2), loc(u)))
        ok_v = (tree.dist[a1] + l1(loc(a1), loc(v)) == tree.dist[v]
                and is_visible(domain, loc(a1), loc(v)))
        if not (ok_u and ok_v):
            raise PlanarityRepairFailed("crossing tree edges not repairable")
        tree.parent[u] = a2
        tree.parent[v] = a1


def _order_and_traverse(tree: SourceTree) -> None:
    """Order children angularly and compute the post-order cyclic array.

    Children of the root are in clockwise cyclic order starting from the
    +x direction; children of an inner node w are in clockwise order
    starting from the direction w -> parent(w).  With planar trees this
    makes the post-order array agree with a topological clockwise rotation
    around the root.
    """
    graph = tree.graph
    children: Dict[int, list] = {}
    for v, p in enumerate(tree.parent):
        if p is not None:
            children.setdefault(p, []).append(v)
    for w, kids in children.items():
        wloc = graph.verts[w].location
        if w == tree.source:
            ref = Point(1, 0)
        else:
            ploc = graph.verts[tree.parent[w]].location
            ref = Point(ploc.x - wloc.x, ploc.y - wloc.y)
        kids.sort(key=functools.cmp_to_key(_cw_cmp(ref, wloc, graph)))
    post: list = []

    def visit(w: int) -> None:
        for c in children.get(w, ()):  # noqa: B023
            visit(c)
        if w != tree.source:
            post.append(w)

    import sys
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, len(graph.verts) * 2 + 100))
    try:
        visit(tree.source)
    finally:
        sys.setrecursionlimit(old)
    tree.children = children
    tree.postorder = post
    tree.pos = {v: i for i, v in enumerate(post)}


# ---------------------------------------------------------------------------
# clockwise_from

def _subtree_first_pos(tree: SourceTree, child: int) -> int:
    """Post-order index of the first vertex in child's subtree block."""
    w = child
    while tree.children.get(w):
        w = tree.children[w][0]
    return tree.pos[w]


def clockwise_from(tree: SourceTree, ref_target: Point, v1: int,
                   v2: int) -> bool:
    """True iff the tree path to v1 is clockwise from the path to v2 with
    respect to the segment source -> ref_target.

    "Clockwise from" means: topologically rotating the segment clockwise
    around the source, the path to v2 is met first.  Assumes neither vertex
    lies on the other's path and ref_target is visible from the source.
    Constant-time via the post-order cyclic array after an O(log n) locate
    of ref_target among the root's children.
    """
    _check_clockwise_pre(tree, v1, v2)
    graph = tree.graph
    root = tree.source
    kids = tree.children.get(root, [])
    if not kids:
        raise PreconditionViolated("root has no children")
    sloc = graph.verts[root].location
    if ref_target == sloc:
        raise PreconditionViolated("ref_target equals the source")
    # binary search: first child met when rotating clockwise from the ray
    # source -> ref_target, in the fixed clockwise-from-+x cyclic order
    cmp = _cw_cmp(Point(norm(ref_target.x - sloc.x),
                        norm(ref_target.y - sloc.y)), sloc, graph)
    # kids are in a fixed clockwise cyclic order; their clockwise offsets
    # from the ray source->ref_target form a rotation of an ascending
    # sequence, so the first-met kid (the offset minimum) sits at the wrap
    # point, found by binary search.
    key = functools.cmp_to_key(cmp)
    first = 0
    if len(kids) > 1 and key(kids[-1]) < key(kids[0]):
        k0 = key(kids[0])
        lo, hi = 1, len(kids) - 1
        while lo <= hi:
            mid = (lo + hi) // 2
            if key(kids[mid]) < k0:
                hi = mid - 1
            else:
                lo = mid + 1
        first = lo
    slot = _subtree_first_pos(tree, kids[first])
    n = len(tree.postorder)
    off1 = (tree.pos[v1] - slot) % n
    off2 = (tree.pos[v2] - slot) % n
    return off2 < off1


def _check_clockwise_pre(tree: SourceTree, v1: int, v2: int) -> None:
    if v1 == v2:
        raise PreconditionViolated("identical vertices")
    for a, b in ((v1, v2), (v2, v1)):
        w = b
        while w is not None:
            if w == a:
                raise PreconditionViolated(
                    "one vertex lies on the other's path")
            w = tree.parent[w]


def clockwise_from_slow(tree: SourceTree, ref_target: Point, v1: int,
                        v2: int) -> bool:
    """Arbiter implementation: compare the two paths geometrically at their
    first divergence vertex."""
    _check_clockwise_pre(tree, v1, v2)
    graph = tree.graph
    path1 = tree.path(v1)
    path2 = tree.path(v2)
    i = 0
    while i < len(path1) and i < len(path2) and path1[i] == path2[i]:
        i += 1
    w = path1[i - 1]
    a, b = path1[i], path2[i]
    wloc = graph.verts[w].location
    if w == tree.source:
        ref = Point(norm(ref_target.x - wloc.x), norm(ref_target.y - wloc.y))
    else:
        ploc = graph.verts[tree.parent[w]].location
        ref = Point(ploc.x - wloc.x, ploc.y - wloc.y)
    cmp = _cw_cmp(ref, wloc, graph)
    # path to v1 is clockwise from path to v2 iff b's branch is met first
    return cmp(b, a) < 0


# ---------------------------------------------------------------------------
# distance tables

@dataclass
class DistanceTables:
    """Lazy per-source geodesic trees with constant-time d/last-edge lookups."""

    graph: PathGraph
    trees: Dict[int, SourceTree] = field(default_factory=dict)

    def tree(self, source: int) -> SourceTree:
        t = self.trees.get(source)
        if t is None:
            t = build_source_tree(self.graph, source)
            self.trees[source] = t
        return t

    def d(self, p: int, q: int):
        """Exact geodesic distance between graph vertices p and q."""
        if q in self.trees:
            return self.trees[q].dist[p]
        if p in self.trees:
            return self.trees[p].dist[q]
        return self.tree(q).dist[p]

    def last_edge(self, p: int, q: int):
        """Last edge of the geodesic from q to p (the edge incident to p)."""
        return self.tree(q).last_edge(p)

    def materialize_all(self) -> None:
        for v in range(len(self.graph.verts)):
            self.tree(v)


def build_tables(graph: PathGraph,
                 materialize: bool = False) -> DistanceTables:
    tables = DistanceTables(graph=graph)
    if materialize:
        tables.materialize_all()
    return tables
