"""Certified balls, projections, oracle windows, Cayley comparison, T1."""
import json

import pytest
from hypothesis import given, settings, strategies as st

from ttgeo.complexes import (
    BASE_EDGE,
    IDENTITY,
    L_GEN,
    R_GEN,
    cayley_ball_psl2z,
    closed_class_key,
    derive_fiber_constant,
    edge_label,
    edge_relation,
    export_ball,
    line_graph_of_dual_tree,
    mat_inv,
    mat_label,
    mat_mul,
    oracle_window,
    parse_edge_label,
    parse_mat,
    project_fibers,
    psl2_canon,
    relator_values,
    restrict_ball,
    t1_subgraph,
    track_farey_edge,
    true_edge_neighbors,
)
from ttgeo.farey import det_abs, make_slope
from ttgeo.fixtures import seed_track
from ttgeo.graphs import UNCERTIFIED, rooted_isomorphic
from ttgeo.tracks import structural_class_key

# ball growth, frozen from direct builds
S11_GROWTH = [(0, 1, 0), (1, 5, 4), (2, 17, 16), (3, 42, 52), (4, 90, 116),
              (5, 186, 244), (6, 378, 500), (7, 762, 1012), (8, 1530, 2036)]
S04_GROWTH = [(0, 1, 0), (1, 5, 4), (2, 13, 12), (3, 33, 32), (4, 81, 86),
              (5, 175, 192), (6, 331, 406), (7, 559, 688), (8, 894, 1138)]


def test_ball_growth_tables(res):
    for surface, table in (("s11", S11_GROWTH), ("s04", S04_GROWTH)):
        big = res.ball(surface, 8)
        got = [
            (r, res.ball(surface, r).graph.vertex_count,
             res.ball(surface, r).graph.edge_count)
            for r in range(9)
        ]
        assert got == table
        assert big.graph.is_connected()


def test_restriction_matches_direct_build(res):
    from ttgeo.complexes import build_ball

    direct = build_ball(seed_track("s11"), 4)
    cut = restrict_ball(res.ball("s11", 8), 4)
    assert sorted(direct.tracks) == sorted(cut.tracks)
    assert set(direct.graph.label_edges()) == set(cut.graph.label_edges())
    assert direct.distances == cut.distances


def test_depths_are_certified_center_distances(res):
    b = res.ball("s11", 4)
    for k, dep in b.distances.items():
        assert b.certified_pair_distance(b.center, k) == dep


def test_radius_bound_enforced():
    from ttgeo.complexes import MAX_RADIUS, build_ball

    with pytest.raises(ValueError):
        build_ball(seed_track("s11"), MAX_RADIUS["s11"] + 1)


def test_seed_projects_to_base_edge():
    for surface in ("s11", "s04"):
        pair = track_farey_edge(seed_track(surface))
        assert edge_label(pair) == BASE_EDGE


def test_edge_label_roundtrip(res):
    b = res.ball("s04", 4)
    for t in b.tracks.values():
        lab = edge_label(track_farey_edge(t))
        assert edge_label(parse_edge_label(lab)) == lab


def test_edge_relations():
    base = parse_edge_label(BASE_EDGE)
    assert edge_relation(base, base) == "same"
    adj = (make_slope(0, 1), make_slope(1, 1))
    assert edge_relation(base, adj) == "adjacent"
    nbo = (make_slope(0, 1), make_slope(1, 2))
    # {0/1, 1/2} shares 0/1 with the base edge; 1/0 vs 1/2 has det 2
    assert edge_relation(base, nbo) == "next-but-one"
    with pytest.raises(ValueError):
        edge_relation(base, (make_slope(5, 2), make_slope(7, 3)))


def test_true_edge_neighbors_counts():
    assert len(true_edge_neighbors(BASE_EDGE, "s11")) == 4
    assert len(true_edge_neighbors(BASE_EDGE, "s04")) == 8


def test_torus_fiber_constant(res):
    rep = derive_fiber_constant(res.ball("s11", 8), res.fibers("s11", 8))
    assert rep["diameter"] == 3
    assert rep["fiber_sizes"] == [2]
    assert rep["interior_labels"] == 61


def test_oracle_windows_agree_across_depths():
    w8, w10 = oracle_window("s11", 8), oracle_window("s11", 10)
    labels = sorted(w8.depths)[:40]
    for u in labels[:8]:
        for v in labels:
            d8 = w8.certified_distance(u, v)
            if d8 is not UNCERTIFIED:
                assert w10.certified_distance(u, v) == d8


def test_dual_tree_line_graph_interior_degree_four():
    g = line_graph_of_dual_tree(6)
    from ttgeo.graphs import bfs_distances

    depth = bfs_distances(g, BASE_EDGE)
    interior = [v for v, d in depth.items() if d <= 2]
    assert interior and all(g.degree(v) == 4 for v in interior)


def test_psl2_arithmetic():
    assert psl2_canon((-1, 0, 0, -1)) == IDENTITY
    w = mat_mul(R_GEN, L_GEN)
    assert mat_mul(w, mat_inv(w)) in (IDENTITY, (-1, 0, 0, -1))
    assert parse_mat(mat_label(w)) == w
    assert all(v == (-1, 0, 0, -1) for v in relator_values().values())


def test_cayley_ball_matches_complex(res):
    cay, mats, dist = cayley_ball_psl2z(4)
    b = res.ball("s11", 4)
    assert cay.vertex_count == b.graph.vertex_count == 90
    assert dist[mat_label(IDENTITY)] == 0
    ok, _ = rooted_isomorphic(b.graph, b.center, cay, mat_label(IDENTITY))
    assert ok


def test_closed_class_is_the_seed_class(res):
    b = res.ball("s04", 4)
    assert closed_class_key(b) == structural_class_key(seed_track("s04"))


def test_t1_is_connected_and_center_lies_on_it(res):
    t1 = t1_subgraph(res.ball("s04", 8))
    assert t1.has_vertex(res.ball("s04", 8).center)
    assert t1.is_connected()


def test_export_ball_formats(res):
    b = res.ball("s11", 2)
    js = export_ball(b, "json")
    assert js == export_ball(b, "json")
    doc = json.loads(js)
    assert doc["vertex_count"] == 17 and doc["edge_count"] == 16
    assert all(set(v) == {"key", "depth", "farey_edge"} for v in doc["vertices"])
    dot = export_ball(b, "dot")
    assert dot.startswith("graph ball {")
    assert dot.count(" -- ") == 16
    with pytest.raises(ValueError):
        export_ball(b, "xml")


@given(st.lists(st.sampled_from("rlRL"), max_size=6))
@settings(max_examples=40, deadline=None)
def test_edge_action_matches_track_action(word):
    # the Farey edge of a translated track is the translated Farey edge
    from ttgeo.action import MappingClass, act_on_edge_label, act_on_track

    gens = {"r": R_GEN, "l": L_GEN, "R": mat_inv(R_GEN), "L": mat_inv(L_GEN)}
    m = IDENTITY
    for ch in word:
        m = mat_mul(m, gens[ch])
    g = MappingClass(m)
    t = seed_track("s11")
    lhs = edge_label(track_farey_edge(act_on_track(g, t)))
    assert lhs == act_on_edge_label(g, BASE_EDGE)
