import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import CORPUS
from oracle import bfs_all
from robberloc.graph import (GraphError, Residue, VertexClass, build_graph, classify, corr_end, inner_name,
                             residue_class, subdivide, vicinity)


def test_single_edge():
    g = build_graph([("a", "b")])
    assert g.dist["a"]["b"] == 1
    assert g.diameter == 1


def test_g5_distances(G5):
    assert G5.dist["C"]["D"] == 3
    assert G5.dist["C"]["E"] == 3
    assert G5.dist["D"]["E"] == 2
    assert G5.diameter == 3


@pytest.mark.parametrize("edges", [
    [("a", "b"), ("c", "d")],
    [("a", "a")],
    [("a", "b"), ("b", "a")],
    [("a,b", "c")],
    [],
])
def test_rejects_bad_graphs(edges):
    with pytest.raises(GraphError):
        build_graph(edges)


def test_m1_is_identity(G5):
    sg = subdivide(G5, 1)
    assert set(sg.vertices) == set(G5.vertices)
    assert all(sg.is_branch(x) for x in sg.vertices)
    assert corr_end(sg, "B") == {"B"}


def test_g5_half(G5):
    sg = subdivide(G5, 2)
    assert len(sg.vertices) == 9
    assert sg.dist["C"]["D"] == 6


def test_triangle_third(K3):
    sg = subdivide(K3, 3)
    assert len(sg.vertices) == 9
    assert all(len(sg.adj[x]) == 2 for x in sg.vertices)
    for a in "abc":
        for b in "abc":
            if a != b:
                assert sg.dist[a][b] == 3


def test_inner_names_use_smaller_endpoint_first(G5):
    sg = subdivide(G5, 3)
    # the edge is given as (C, A); offsets run from A
    assert inner_name("A", "C", 1) in sg.vertices
    assert sg.dist["A"][inner_name("A", "C", 1)] == 1


def test_classify():
    g = build_graph([("A", "B")])
    assert classify(subdivide(g, 2), "A") is VertexClass.BRANCH
    assert classify(subdivide(g, 2), "A~B:1") is VertexClass.MIDPOINT
    assert classify(subdivide(g, 3), "A~B:1") is VertexClass.NEAR_MIDPOINT
    assert classify(subdivide(g, 4), "A~B:1") is VertexClass.INNER_OTHER


def test_vicinity():
    g = build_graph([("A", "B")])
    assert vicinity(subdivide(g, 3), "A~B:1") == {"A"}
    assert vicinity(subdivide(g, 2), "A~B:1") == {"A", "B"}
    assert vicinity(subdivide(g, 2), "B") == {"B"}
    assert corr_end(subdivide(g, 2), "A~B:1") == {"A", "B"}


@pytest.mark.parametrize("d,m,want", [
    (6, 3, Residue.AT_BRANCH),
    (4, 2, Residue.AT_BRANCH),
    (5, 2, Residue.AT_MIDPOINT_ZONE),
    (7, 3, Residue.AT_MIDPOINT_ZONE),
    (5, 4, Residue.OTHER),
    (6, 4, Residue.AT_MIDPOINT_ZONE),
])
def test_residue_class(d, m, want):
    assert residue_class(d, m) is want


def test_residue_needs_m2():
    with pytest.raises(GraphError):
        residue_class(3, 1)


@pytest.mark.parametrize("m", [2, 3, 4])
def test_residue_tabulation(G5, K3, m):
    # a branch-probe result is in the zone exactly when the robber sits at depth m//2
    for g in (G5, K3):
        sg = subdivide(g, m)
        for p in sg.branch_vertices:
            for x in sg.vertices:
                cls = residue_class(sg.dist[p][x], m)
                assert (cls is Residue.AT_BRANCH) == sg.is_branch(x)
                assert (cls is Residue.AT_MIDPOINT_ZONE) == (sg.depth(x) == m // 2 and not sg.is_branch(x))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(CORPUS), st.integers(1, 4))
def test_subdivision_scales_distances(named, m):
    _, g = named
    sg = subdivide(g, m)
    assert len(sg.vertices) == len(g) + len(g.edges) * (m - 1)
    assert len(sg.edges) == len(g.edges) * m
    ref = bfs_all(sg.adj)
    for a in g.vertices:
        for b in g.vertices:
            assert sg.dist[a][b] == m * g.dist[a][b] == ref[a][b]
