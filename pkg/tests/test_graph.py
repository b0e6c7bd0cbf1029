"""Dynamic graph container, BFS oracle, and the script exchange format."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dynsp.graph import (
    DeleteEdge,
    DistQuery,
    DynamicGraph,
    IllegalUpdate,
    InsertEdge,
    PathQuery,
    PhaseMark,
    UpdateScript,
    all_pairs_dist,
    apply_update,
    bfs_dist,
    bfs_dist_bounded,
    parse_script,
    serialize_script,
    validate_path,
)

INF = math.inf


def test_illegal_updates_rejected():
    g = DynamicGraph(4)
    with pytest.raises(IllegalUpdate):
        g.insert_edge(1, 1)
    with pytest.raises(IllegalUpdate):
        g.delete_edge(0, 1)
    g.insert_edge(0, 1)
    with pytest.raises(IllegalUpdate):
        g.insert_edge(1, 0)  # same undirected edge
    with pytest.raises(IllegalUpdate):
        g.insert_edge(0, 4)


def test_undirected_edges_are_mirrored():
    g = DynamicGraph(3)
    g.insert_edge(0, 2)
    assert g.has_edge(2, 0) and g.has_edge(0, 2)
    assert list(g.edges()) == [(0, 2)]
    g.delete_edge(2, 0)
    assert g.edge_count == 0


def test_directed_edges_are_oriented():
    g = DynamicGraph(3, directed=True)
    g.insert_edge(0, 1)
    assert g.has_edge(0, 1) and not g.has_edge(1, 0)
    g.insert_edge(1, 0)
    assert g.edge_count == 2
    assert 0 in g.radj[1] and 1 in g.radj[0]


def test_bfs_on_known_shapes():
    path = DynamicGraph(5)
    for v in range(4):
        path.insert_edge(v, v + 1)
    assert bfs_dist(path, 0) == [0, 1, 2, 3, 4]
    assert bfs_dist_bounded(path, 0, 2) == {0: 0, 1: 1, 2: 2}
    lonely = DynamicGraph(3)
    assert bfs_dist(lonely, 1) == [INF, 0, INF]


@given(st.integers(min_value=2, max_value=9), st.data())
@settings(max_examples=30, deadline=None)
def test_bfs_triangle_inequality(n, data):
    g = DynamicGraph(n)
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    for u, v in pairs:
        if data.draw(st.booleans()):
            g.insert_edge(u, v)
    dist = all_pairs_dist(g)
    for a in range(n):
        for b in range(n):
            for c in range(n):
                assert dist[a][c] <= dist[a][b] + dist[b][c]


def test_script_roundtrip():
    script = UpdateScript(
        n=5,
        directed=False,
        initial_edges=[(0, 1), (1, 2)],
        events=[
            InsertEdge(2, 3),
            DistQuery(0, 3, 3.0),
            PathQuery(0, 3),
            DeleteEdge(0, 1),
            DistQuery(0, 3, INF),
            PhaseMark(0, 1),
        ],
    )
    text = serialize_script(script)
    back = parse_script(text)
    assert back == script
    script.validate()


def test_parse_rejects_garbage():
    with pytest.raises(ValueError):
        parse_script("E 0 1\n")  # missing header
    with pytest.raises(ValueError):
        parse_script("N 4 0\nX 1 2\n")
    with pytest.raises(ValueError):
        parse_script("N 4 0\nI 1\n")


def test_validate_path():
    g = DynamicGraph(4)
    g.insert_edge(0, 1)
    g.insert_edge(1, 2)
    assert validate_path(g, [0, 1, 2])
    assert not validate_path(g, [0, 2])
    assert validate_path(g, [3])


def test_apply_update_dispatch():
    g = DynamicGraph(3)
    apply_update(g, InsertEdge(0, 1))
    assert g.has_edge(0, 1)
    apply_update(g, DeleteEdge(0, 1))
    assert not g.has_edge(0, 1)
    with pytest.raises(IllegalUpdate):
        apply_update(g, DistQuery(0, 1))
