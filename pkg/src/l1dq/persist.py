"""Versioned binary persistence for a built query index.

Layout (all integers little-endian): the magic ``L1DQ1``, the graph
variant, the domain rings, the graph vertices and weighted edges, and the
materialized per-source geodesic trees (distances, parents, postorder).
Rationals are stored as length-prefixed ASCII ``p/q`` byte strings.
On load the graph is rebuilt deterministically from the domain and checked
vertex-by-vertex against the stored copy before the trees are attached.
"""
from __future__ import annotations

import io
import struct
from typing import BinaryIO

from .geom import build_decompositions, coord_str, parse_coord, validate_domain
from .graph import build_graph
from .prep import DistanceTables, SourceTree

MAGIC = b"L1DQ1"


class IndexFormatError(ValueError):
    """The file is not a valid index or disagrees with its own domain."""


def _w_u32(f: BinaryIO, v: int) -> None:
    f.write(struct.pack("<I", v))


def _w_i32(f: BinaryIO, v: int) -> None:
    f.write(struct.pack("<i", v))


def _w_rat(f: BinaryIO, v) -> None:
    b = coord_str(v).encode("ascii")
    _w_u32(f, len(b))
    f.write(b)


def _r_u32(f: BinaryIO) -> int:
    return struct.unpack("<I", _r_exact(f, 4))[0]


def _r_i32(f: BinaryIO) -> int:
    return struct.unpack("<i", _r_exact(f, 4))[0]


def _r_exact(f: BinaryIO, n: int) -> bytes:
    b = f.read(n)
    if len(b) != n:
        raise IndexFormatError("truncated index file")
    return b


def _r_rat(f: BinaryIO):
    n = _r_u32(f)
    try:
        return parse_coord(_r_exact(f, n).decode("ascii"))
    except (ValueError, UnicodeDecodeError) as e:
        raise IndexFormatError(f"bad rational: {e}") from e


def save_index(index, path: str) -> None:
    """Write a fully materialized index; lazy trees are built first."""
    index.tables.materialize_all()
    graph = index.graph
    nv = graph.num_vertices
    buf = io.BytesIO()
    buf.write(MAGIC)
    vb = index.variant.encode("ascii")
    _w_u32(buf, len(vb))
    buf.write(vb)
    rings = [index.domain.outer] + list(index.domain.holes)
    _w_u32(buf, len(rings))
    for ring in rings:
        _w_u32(buf, len(ring))
        for p in ring:
            _w_rat(buf, p.x)
            _w_rat(buf, p.y)
    _w_u32(buf, nv)
    for v in graph.verts:
        _w_rat(buf, v.location.x)
        _w_rat(buf, v.location.y)
    edges = [(a, b, w) for a in range(nv)
             for b, w in graph.adj[a] if a < b]
    _w_u32(buf, len(edges))
    for a, b, w in edges:
        _w_u32(buf, a)
        _w_u32(buf, b)
        _w_rat(buf, w)
    trees = [index.tables.trees[src] for src in sorted(index.tables.trees)]
    _w_u32(buf, len(trees))
    for t in trees:
        _w_u32(buf, t.source)
        for d in t.dist:
            _w_rat(buf, d)
        for p in t.parent:
            _w_i32(buf, -1 if p is None else p)
        _w_u32(buf, len(t.postorder))
        for g in t.postorder:
            _w_u32(buf, g)
    with open(path, "wb") as f:
        f.write(buf.getvalue())


def load_index(path: str):
    """Load an index; rebuilds the domain structures and verifies that the
    stored graph matches the one the domain deterministically produces."""
    from .dcquery import QueryIndex

    with open(path, "rb") as fh:
        f = io.BytesIO(fh.read())
    if _r_exact(f, len(MAGIC)) != MAGIC:
        raise IndexFormatError("bad magic")
    variant = _r_exact(f, _r_u32(f)).decode("ascii")
    rings = []
    for _ in range(_r_u32(f)):
        rings.append([(_r_rat(f), _r_rat(f)) for _ in range(_r_u32(f))])
    if not rings:
        raise IndexFormatError("no rings")
    domain = validate_domain(rings[0], rings[1:])
    graph = build_graph(domain, variant)
    nv = _r_u32(f)
    if nv != graph.num_vertices:
        raise IndexFormatError("stored graph size disagrees with domain")
    for i in range(nv):
        x, y = _r_rat(f), _r_rat(f)
        loc = graph.verts[i].location
        if (x, y) != (loc.x, loc.y):
            raise IndexFormatError(f"stored vertex {i} disagrees with domain")
    stored_edges = _r_u32(f)
    if stored_edges != graph.num_edges:
        raise IndexFormatError("stored edge count disagrees with domain")
    for _ in range(stored_edges):
        a, b, w = _r_u32(f), _r_u32(f), _r_rat(f)
        if not any(j == b and wt == w for j, wt in graph.adj[a]):
            raise IndexFormatError(f"stored edge {a}-{b} disagrees")
    tables = DistanceTables(graph=graph)
    for _ in range(_r_u32(f)):
        src = _r_u32(f)
        dist = [_r_rat(f) for _ in range(nv)]
        parent = [(lambda v: None if v < 0 else v)(_r_i32(f))
                  for _ in range(nv)]
        postorder = [_r_u32(f) for _ in range(_r_u32(f))]
        # children of each vertex appear in the postorder in the original
        # traversal (angular) order, so the lists rebuild exactly
        children = {}
        for g in postorder:
            children.setdefault(parent[g], []).append(g)
        pos = {g: i for i, g in enumerate(postorder)}
        tables.trees[src] = SourceTree(
            source=src, dist=dist, parent=parent, children=children,
            postorder=postorder, pos=pos, graph=graph)
    return QueryIndex(domain=domain, decomps=build_decompositions(domain),
                      graph=graph, tables=tables)
