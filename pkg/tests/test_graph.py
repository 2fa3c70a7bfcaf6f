"""Cut-line tree and the path-preserving Steiner graphs."""

import math
from fractions import Fraction
from itertools import combinations

from l1dq import fixtures
from l1dq.geom import LEFT, is_visible, l1, pt, validate_domain
from l1dq.graph import (
    TYPE1,
    TYPE2,
    build_cutline_tree,
    build_graph,
    generate_type1,
    generate_type2,
    graph_dijkstra,
)
from l1dq.oracle import oracle_distance


def test_tree_fix_h_root_line():
    h = fixtures.fix_h()
    tree = build_cutline_tree(h)
    root = tree.node(tree.root)
    assert root.line == 18
    assert len(root.vertex_ids) == 7
    left, right = tree.node(root.left), tree.node(root.right)
    assert len(left.vertex_ids) == 4 and len(right.vertex_ids) == 3


def test_tree_fix_e_lines():
    e = fixtures.fix_e()
    tree = build_cutline_tree(e)
    root = tree.node(tree.root)
    assert root.line == Fraction(41, 2)
    children = sorted((tree.node(root.left).line, tree.node(root.right).line))
    assert children == [Fraction(1, 2), Fraction(81, 2)]


def test_tree_invariants():
    h = fixtures.fix_h()
    tree = build_cutline_tree(h)
    vx = [v.x for v in h.vertices]
    for nd in tree.nodes:
        if nd.is_leaf:
            assert len(nd.vertex_ids) == 1
            assert nd.line == vx[nd.vertex_ids[0]]
        else:
            l, r = tree.node(nd.left), tree.node(nd.right)
            k = len(nd.vertex_ids)
            assert len(l.vertex_ids) == (k + 1) // 2
            assert len(r.vertex_ids) == k - (k + 1) // 2
            assert all(vx[i] < nd.line for i in l.vertex_ids)
            assert all(vx[i] > nd.line for i in r.vertex_ids)
    assert tree.height <= math.ceil(math.log2(h.n)) + 1


def test_type1_events():
    h = fixtures.fix_h()
    events = generate_type1(h)
    locs = {loc for loc, _ in events}
    assert pt(Fraction(20, 41), 20) in locs  # (10,20) projected left
    e = fixtures.fix_e()
    assert len(generate_type1(e)) == 16  # 4 projections per vertex


def test_type2_events():
    h = fixtures.fix_h()
    tree = build_cutline_tree(h)
    events = generate_type2(h, tree)
    root = tree.node(tree.root)
    root_pts = {loc for loc, tag in events if tag.host == root.id}
    assert pt(18, 20) in root_pts          # (10,20) sees the root line
    assert pt(18, 0) not in root_pts       # (0,0) does not
    # a leaf's type-2 point is the vertex itself
    for vid, nid in tree.leaf_of_vertex.items():
        leaf_pts = [loc for loc, tag in events if tag.host == nid]
        assert h.vertices[vid] in leaf_pts


def test_graph_distances_fix_e():
    e = fixtures.fix_e()
    g = build_graph(e, "G")
    dist = graph_dijkstra(g, g.loc2id[pt(0, 0)])
    assert dist[g.loc2id[pt(41, 40)]] == 81


def test_graph_distances_fix_h_hole_vertices():
    h = fixtures.fix_h()
    g = build_graph(h, "G")
    dist = graph_dijkstra(g, g.loc2id[pt(10, 20)])
    assert dist[g.loc2id[pt(20, 23)]] == 13


def test_g1_contains_g():
    h = fixtures.fix_h()
    g = build_graph(h, "G")
    g1 = build_graph(h, "G1")
    g_locs = {v.location for v in g.verts}
    g1_locs = {v.location for v in g1.verts}
    assert g_locs <= g1_locs
    assert g1.num_vertices >= g.num_vertices


def test_graph_structural_invariants():
    h = fixtures.fix_h()
    for variant in ("G", "G1"):
        g = build_graph(h, variant)
        for a in range(g.num_vertices):
            for b, w in g.adj[a]:
                pa, pb = g.verts[a].location, g.verts[b].location
                assert w == l1(pa, pb)
                assert is_visible(h, pa, pb)
        for nd_id, ids in g.cutline_points.items():
            ys = [g.verts[i].location.y for i in ids]
            assert ys == sorted(ys)
            assert len(set(ys)) == len(ys)
        for eidx, ids in g.edge_points.items():
            e = h.edges[eidx]
            ds = [l1(e.a, g.verts[i].location) for i in ids]
            assert ds == sorted(ds) and len(set(ds)) == len(ds)


def test_graph_size_bound():
    h = fixtures.fix_h()
    g = build_graph(h, "G")
    assert g.num_vertices <= 4 * h.n * math.log2(h.n)


def test_path_preserving_exhaustive():
    for dom in (fixtures.fix_e(), fixtures.fix_h()):
        g = build_graph(dom, "G")
        for a, b in combinations(range(dom.n), 2):
            dist = graph_dijkstra(g, g.vertex_gid[a])
            assert dist[g.vertex_gid[b]] == oracle_distance(
                dom, dom.vertices[a], dom.vertices[b])


def test_path_preserving_g1():
    h = fixtures.fix_h()
    g1 = build_graph(h, "G1")
    for a, b in combinations(range(h.n), 2):
        dist = graph_dijkstra(g1, g1.vertex_gid[a])
        assert dist[g1.vertex_gid[b]] == oracle_distance(
            h, h.vertices[a], h.vertices[b])


def test_triangle_domain_tree():
    tri = validate_domain([(0, 0), (6, 1), (2, 5)])
    tree = build_cutline_tree(tri)
    root = tree.node(tree.root)
    assert root.line == Fraction(2 + 6, 2)  # xs 0,2,6: split 2|1 between 2 and 6
