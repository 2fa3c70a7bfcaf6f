"""Path-preserving Steiner graphs over a polygonal domain.

The construction has three layers:

* a *cut-line tree*: a balanced binary tree that recursively splits the
  polygon vertices by x-coordinate; every node carries a vertical cut-line,
* *Steiner points*: type-1 points are the four axis projections of every
  polygon vertex onto the boundary; type-2 points are horizontal projections
  of a node's vertices onto that node's cut-line (when horizontally
  visible); type-3 points (variant G1) project each super-level top node's
  vertices onto all cut-lines of the top node's super-level subtree,
* *edges*: each definer to its Steiner points, consecutive Steiner points
  along each boundary edge, and consecutive mutually-visible Steiner points
  along each cut-line.  All weights are exact L1 lengths.

The resulting graph preserves L1 shortest-path distances between polygon
vertices, and (with per-query gateways) between arbitrary interior points.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .geom import (
    DOWN,
    LEFT,
    RIGHT,
    UP,
    Coord,
    Decompositions,
    Point,
    PolygonalDomain,
    axis_projection,
    horizontally_visible,
    is_visible,
    l1,
    norm,
)

TYPE1 = "type1"
TYPE2 = "type2"
TYPE3 = "type3"
POLY_VERTEX = "polygon_vertex"


# ---------------------------------------------------------------------------
# cut-line tree

@dataclass
class CutNode:
    """One node of the cut-line tree."""

    id: int
    vertex_ids: tuple       # polygon-vertex ids in V(u), sorted by x
    line: Coord             # abscissa of the vertical cut-line l(u)
    level: int              # root = 1
    parent: Optional[int] = None
    left: Optional[int] = None
    right: Optional[int] = None
    super_level: int = 1

    @property
    def is_leaf(self) -> bool:
        return self.left is None


@dataclass
class CutLineTree:
    """Balanced median-x split tree over the polygon vertices."""

    nodes: List[CutNode]
    root: int
    super_width: int
    leaf_of_vertex: Dict[int, int] = field(default_factory=dict)

    def node(self, i: int) -> CutNode:
        return self.nodes[i]

    @property
    def height(self) -> int:
        return max(nd.level for nd in self.nodes)

    @property
    def num_super_levels(self) -> int:
        return max(nd.super_level for nd in self.nodes)

    def is_super_top(self, node: CutNode) -> bool:
        """True iff the node is on the first level of its super-level."""
        if node.parent is None:
            return True
        return self.nodes[node.parent].super_level != node.super_level

    def super_subtree(self, top: CutNode) -> List[CutNode]:
        """Nodes of the subtree of ``top`` within ``top``'s super-level."""
        out = []
        stack = [top.id]
        while stack:
            nd = self.nodes[stack.pop()]
            if nd.super_level != top.super_level:
                continue
            out.append(nd)
            for c in (nd.left, nd.right):
                if c is not None:
                    stack.append(c)
        return out


def _super_width(n: int) -> int:
    """max(1, floor(log2 log2 n)); exact in integer arithmetic."""
    k = max(1, n.bit_length() - 1)  # floor(log2 n)
    return max(1, k.bit_length() - 1)


def build_cutline_tree(domain: PolygonalDomain) -> CutLineTree:
    """Split vertices by x: the left child gets the ceil(k/2) smallest.

    For k >= 2 vertices the cut-line is the x-midpoint of the ceil(k/2)-th
    and (ceil(k/2)+1)-th vertices (it never hits a vertex: vertex x's are
    distinct integers).  A leaf's cut-line passes through its single vertex.
    """
    order = sorted(range(domain.n), key=lambda i: domain.vertices[i].x)
    width = _super_width(domain.n)
    tree = CutLineTree(nodes=[], root=0, super_width=width)

    def build(ids: list, level: int, parent) -> int:
        nid = len(tree.nodes)
        sl = (level - 1) // width + 1
        if len(ids) == 1:
            line = domain.vertices[ids[0]].x
            tree.nodes.append(CutNode(nid, tuple(ids), line, level, parent,
                                      super_level=sl))
            tree.leaf_of_vertex[ids[0]] = nid
            return nid
        half = (len(ids) + 1) // 2
        xa = domain.vertices[ids[half - 1]].x
        xb = domain.vertices[ids[half]].x
        line = norm(Fraction(xa + xb, 2))
        node = CutNode(nid, tuple(ids), line, level, parent, super_level=sl)
        tree.nodes.append(node)
        node.left = build(ids[:half], level + 1, nid)
        node.right = build(ids[half:], level + 1, nid)
        return nid

    build(order, 1, None)
    return tree


# ---------------------------------------------------------------------------
# Steiner points

@dataclass(frozen=True)
class SteinerTag:
    """One generation event: why a point exists."""

    kind: str            # type1 | type2 | type3 | polygon_vertex
    definer: int         # polygon-vertex id
    host: int            # boundary-edge index (type1) or cut-node id (2/3)
    direction: str = ""  # projection direction for type1


@dataclass
class GraphVertex:
    """A graph vertex: a location plus all of its generation tags."""

    id: int
    location: Point
    tags: Tuple[SteinerTag, ...]

    @property
    def kinds(self) -> frozenset:
        return frozenset(t.kind for t in self.tags)


def generate_type1(domain: PolygonalDomain,
                   decomps: Optional[Decompositions] = None) -> list:
    """Axis projections of every polygon vertex onto the boundary.

    Returns a list of (location, SteinerTag); coincident locations are
    merged later by the assembler.  A projection equal to the vertex itself
    (the ray exits immediately) still yields an event at the vertex.
    """
    events = []
    for vid, v in enumerate(domain.vertices):
        for direction in (LEFT, RIGHT, UP, DOWN):
            p, edge = axis_projection(domain, v, direction)
            events.append((p, SteinerTag(TYPE1, vid, edge, direction)))
    return events


def generate_type2(domain: PolygonalDomain, tree: CutLineTree,
                   decomps: Optional[Decompositions] = None) -> list:
    """Horizontal projections of each node's vertices onto its cut-line."""
    events = []
    for node in tree.nodes:
        for vid in node.vertex_ids:
            v = domain.vertices[vid]
            q = horizontally_visible(domain, v, node.line)
            if q is not None:
                events.append((q, SteinerTag(TYPE2, vid, node.id)))
    return events


def generate_type3(domain: PolygonalDomain, tree: CutLineTree) -> list:
    """Variant G1: project super-level top vertices onto every cut-line of
    the top's super-level subtree they are horizontally visible to."""
    events = []
    for top in tree.nodes:
        if not tree.is_super_top(top):
            continue
        sub = tree.super_subtree(top)
        for vid in top.vertex_ids:
            v = domain.vertices[vid]
            for nd in sub:
                q = horizontally_visible(domain, v, nd.line)
                if q is not None:
                    events.append((q, SteinerTag(TYPE3, vid, nd.id)))
    return events


# ---------------------------------------------------------------------------
# graph assembly

@dataclass
class PathGraph:
    """The assembled path-preserving graph."""

    variant: str
    domain: PolygonalDomain
    tree: CutLineTree
    verts: List[GraphVertex]
    adj: List[list]                  # adj[i] = [(j, weight), ...]
    loc2id: Dict[Point, int]
    vertex_gid: List[int]            # polygon-vertex id -> graph id
    cutline_points: Dict[int, list]  # cut-node id -> graph ids by increasing y
    edge_points: Dict[int, list]     # boundary-edge index -> graph ids along edge

    @property
    def num_vertices(self) -> int:
        return len(self.verts)

    @property
    def num_edges(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def id_of(self, p: Point) -> Optional[int]:
        return self.loc2id.get(p)

    def v1_ids(self) -> list:
        """Graph ids of boundary Steiner points (vertices + projections)."""
        return [v.id for v in self.verts
                if v.kinds & {TYPE1, POLY_VERTEX}]


def _add_edge(adj, a: int, b: int, w) -> None:
    if a == b:
        return
    if any(j == b for j, _ in adj[a]):
        return
    adj[a].append((b, w))
    adj[b].append((a, w))


def assemble_graph(domain: PolygonalDomain, tree: CutLineTree,
                   steiner_events: list, variant: str = "G") -> PathGraph:
    """Merge Steiner events into vertices and lay down the three edge rules."""
    # polygon vertices are graph vertices in every variant
    events = [(v, SteinerTag(POLY_VERTEX, vid, -1))
              for vid, v in enumerate(domain.vertices)]
    events.extend(steiner_events)

    by_loc: Dict[Point, list] = {}
    order: List[Point] = []
    for loc, tag in events:
        if loc not in by_loc:
            by_loc[loc] = []
            order.append(loc)
        by_loc[loc].append(tag)

    verts = [GraphVertex(i, loc, tuple(by_loc[loc]))
             for i, loc in enumerate(order)]
    loc2id = {v.location: v.id for v in verts}
    vertex_gid = [loc2id[v] for v in domain.vertices]
    adj: List[list] = [[] for _ in verts]

    # rule (a): definer <-> its Steiner points
    for v in verts:
        for tag in v.tags:
            if tag.kind in (TYPE1, TYPE2, TYPE3):
                d = vertex_gid[tag.definer]
                _add_edge(adj, v.id, d, l1(v.location, verts[d].location))

    # rule (b): consecutive Steiner points along each boundary edge
    edge_points: Dict[int, list] = {e.index: [] for e in domain.edges}
    for v in verts:
        hosts = {t.host for t in v.tags if t.kind == TYPE1}
        for h in hosts:
            edge_points[h].append(v.id)
    for gvid, v in enumerate(domain.vertices):
        # an endpoint belongs to both of its incident boundary edges
        for e in domain.edges:
            if e.a == v or e.b == v:
                if vertex_gid[gvid] not in edge_points[e.index]:
                    edge_points[e.index].append(vertex_gid[gvid])
    for e in domain.edges:
        ids = edge_points[e.index]
        ids.sort(key=lambda i: (l1(e.a, verts[i].location)))
        for a, b in zip(ids, ids[1:]):
            _add_edge(adj, a, b, l1(verts[a].location, verts[b].location))

    # rule (c): consecutive mutually visible Steiner points along cut-lines
    cutline_points: Dict[int, list] = {nd.id: [] for nd in tree.nodes}
    for v in verts:
        hosts = {t.host for t in v.tags if t.kind in (TYPE2, TYPE3)}
        for h in hosts:
            cutline_points[h].append(v.id)
    for nd in tree.nodes:
        ids = cutline_points[nd.id]
        ids.sort(key=lambda i: verts[i].location.y)
        for a, b in zip(ids, ids[1:]):
            pa, pb = verts[a].location, verts[b].location
            if is_visible(domain, pa, pb):
                _add_edge(adj, a, b, l1(pa, pb))

    return PathGraph(variant=variant, domain=domain, tree=tree, verts=verts,
                     adj=adj, loc2id=loc2id, vertex_gid=vertex_gid,
                     cutline_points=cutline_points, edge_points=edge_points)


def build_graph(domain: PolygonalDomain, variant: str = "G",
                tree: Optional[CutLineTree] = None) -> PathGraph:
    """Convenience builder for variants G and G1."""
    if variant not in ("G", "G1"):
        raise ValueError(f"unknown graph variant {variant!r}")
    if tree is None:
        tree = build_cutline_tree(domain)
    events = generate_type1(domain)
    if variant == "G":
        events += generate_type2(domain, tree)
    else:
        # type-2 points are a subset of type-3 points (the super-level top
        # on a vertex's root-leaf path covers every cut-line below it), but
        # both tag sets are kept: gateways for the s side use type-2 tags.
        events += generate_type2(domain, tree)
        events += generate_type3(domain, tree)
    return assemble_graph(domain, tree, events, variant)


def graph_dijkstra(graph: PathGraph, source_gid: int) -> list:
    """Plain exact Dijkstra inside the graph (debug/verification only)."""
    import heapq

    dist = [None] * graph.num_vertices
    heap = [(0, source_gid)]
    dist[source_gid] = 0
    while heap:
        d, u = heapq.heappop(heap)
        if dist[u] is not None and d > dist[u]:
            continue
        for v, w in graph.adj[u]:
            nd = norm(d + w)
            if dist[v] is None or nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


def graph_to_json(graph: PathGraph) -> dict:
    """Debug dump: vertices and edges with exact "p/q" coordinates."""
    from .geom import coord_str

    verts = [{"id": v.id, "x": coord_str(v.location.x),
              "y": coord_str(v.location.y),
              "kind": sorted(v.kinds)} for v in graph.verts]
    edges = []
    for a in range(graph.num_vertices):
        for b, w in graph.adj[a]:
            if a < b:
                edges.append({"a": a, "b": b, "w": coord_str(w)})
    return {"variant": graph.variant, "vertices": verts, "edges": edges}
