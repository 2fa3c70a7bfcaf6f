"""Independent exact L1 shortest-path oracle.

Ground truth for everything else in the package.  It runs Dijkstra on the
visibility graph over the polygon vertices plus the query endpoints, with
exact L1 edge weights.

Why this is exact for the L1 metric: within any homotopy class of paths the
Euclidean-taut path simultaneously minimizes the length under every convex
norm, taut paths bend only at polygon vertices, and the visibility graph
contains the taut path of every class.  Hence the minimum over the graph is
the global L1 optimum, and some optimal path has all interior bends at
polygon vertices.

Determinism: ties are broken lexicographically by
(L1 length, hop count, path vertex-id sequence).

This module favors simplicity over speed (quadratic/cubic behavior is fine).
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .geom import Point, PolygonalDomain, is_visible, l1, norm

_vis_cache: Dict[int, Tuple[PolygonalDomain, list]] = {}


def vertex_visibility(domain: PolygonalDomain) -> list:
    """Adjacency lists over polygon vertices: adj[i] = [(j, weight), ...]."""
    cached = _vis_cache.get(id(domain))
    if cached is not None and cached[0] is domain:
        return cached[1]
    n = domain.n
    adj: List[list] = [[] for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            a, b = domain.vertices[i], domain.vertices[j]
            if is_visible(domain, a, b):
                w = l1(a, b)
                adj[i].append((j, w))
                adj[j].append((i, w))
    _vis_cache[id(domain)] = (domain, adj)
    return adj


def visible_vertices(domain: PolygonalDomain, p: Point) -> list:
    """Polygon-vertex ids visible from p, with L1 weights."""
    out = []
    for i, v in enumerate(domain.vertices):
        if is_visible(domain, p, v):
            out.append((i, l1(p, v)))
    return out


@dataclass(frozen=True)
class OracleRun:
    """Result of a multi-target oracle run from one source."""

    source: Point
    dist: tuple          # distance per target, aligned with the targets list
    paths: tuple         # realizing polyline per target
    vertex_dist: tuple   # distance to every polygon vertex


def oracle_all_from(domain: PolygonalDomain, source: Point,
                    targets: Sequence[Point],
                    target_vis: Optional[Sequence[list]] = None) -> OracleRun:
    """Exact distances (and one realizing path each) from source to targets.

    Interior bend points of every returned path are polygon vertices.
    ``target_vis`` may supply precomputed [(vertex_id, weight), ...] lists
    per target to avoid repeated visibility scans.

    Targets act as sinks only: paths never route through another target.
    """
    domain.require_inside(source)
    n = domain.n
    adj = vertex_visibility(domain)
    verts = domain.vertices

    # node ids: 0..n-1 vertices, n = source, n+1.. = targets (sinks)
    SRC = n
    tid0 = n + 1
    if target_vis is None:
        target_vis = [visible_vertices(domain, t) for t in targets]

    # sink edges indexed by expandable node: vertex -> [(target_node, w)]
    sink_edges: List[list] = [[] for _ in range(n + 1)]
    for k, t in enumerate(targets):
        domain.require_inside(t)
        node = tid0 + k
        if t == source:
            sink_edges[SRC].append((node, 0))
        elif is_visible(domain, source, t):
            sink_edges[SRC].append((node, l1(source, t)))
        for i, w in target_vis[k]:
            sink_edges[i].append((node, w))

    total = tid0 + len(targets)
    best: list = [None] * total  # key = (dist, hops, id-path tuple)
    heap = [( 0, 0, (SRC,), SRC)]
    best[SRC] = (0, 0, (SRC,))
    parent: list = [None] * total
    while heap:
        d, hops, path, u = heapq.heappop(heap)
        if best[u] is not None and (d, hops, path) > best[u]:
            continue
        if u >= tid0:
            continue  # sink
        out = []
        if u < n:
            out.extend(adj[u])
        if u == SRC:
            out.extend(visible_vertices(domain, source))
        out.extend(sink_edges[u])
        for v, w in out:
            key = (norm(d + w), hops + 1, path + (v,))
            if best[v] is None or key < best[v]:
                best[v] = key
                parent[v] = u
                heapq.heappush(heap, (key[0], key[1], key[2], v))

    def node_point(i: int) -> Point:
        if i < n:
            return verts[i]
        if i == SRC:
            return source
        return targets[i - tid0]

    dists = []
    paths = []
    for k in range(len(targets)):
        node = tid0 + k
        if best[node] is None:
            raise RuntimeError("unreachable target in a connected domain")
        dists.append(best[node][0])
        chain = [node_point(i) for i in best[node][2]]
        # collapse a zero-length first hop when source == target
        if len(chain) > 1 and chain[0] == chain[1]:
            chain = chain[1:]
        paths.append(tuple(chain))
    vdist = tuple(best[i][0] if best[i] is not None else None
                  for i in range(n))
    return OracleRun(source=source, dist=tuple(dists), paths=tuple(paths),
                     vertex_dist=vdist)


def oracle_distance_path(domain: PolygonalDomain, s: Point,
                         t: Point) -> Tuple:
    """Exact L1 geodesic distance from s to t and one realizing polyline."""
    if s == t:
        domain.require_inside(s)
        return 0, (s,)
    run = oracle_all_from(domain, s, [t])
    return run.dist[0], run.paths[0]


def oracle_distance(domain: PolygonalDomain, s: Point, t: Point):
    return oracle_distance_path(domain, s, t)[0]
