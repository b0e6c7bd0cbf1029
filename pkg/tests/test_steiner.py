"""Steiner trees against an exhaustive optimal-superset oracle."""

import itertools
import math
import random

import pytest

from dynsp.graph import DeleteEdge, DynamicGraph, InsertEdge, bfs_dist
from dynsp.steiner import (
    Disconnected,
    SteinerState,
    TerminalStateError,
    steiner_add_terminal,
    steiner_edge_update,
    steiner_remove_terminal,
)

INF = math.inf


def opt_steiner(g: DynamicGraph, S) -> float:
    """Minimum edges of a connected subgraph spanning S (exhaustive)."""
    S = sorted(S)
    if len(S) <= 1:
        return 0
    others = [v for v in range(g.n) if v not in S]
    for size in range(len(S), g.n + 1):
        for extra in itertools.combinations(others, size - len(S)):
            U = set(S) | set(extra)
            sub = DynamicGraph(g.n)
            for u, v in g.edges():
                if u in U and v in U:
                    sub.insert_edge(u, v)
            d = bfs_dist(sub, S[0])
            if all(d[v] < INF for v in U):
                return size - 1
    return INF


def check_tree(st: SteinerState, g: DynamicGraph, eps):
    tree = st.tree
    for u, v in tree.edges:
        assert g.has_edge(u, v)
    assert set(st.S) <= set(tree.vertices)
    # connectivity: the tree has exactly |V|-1 edges and BFS spans it
    if tree.vertices:
        sub = DynamicGraph(g.n)
        for u, v in tree.edges:
            sub.insert_edge(u, v)
        d = bfs_dist(sub, min(tree.vertices))
        assert all(d[v] < INF for v in tree.vertices)
        assert len(tree.edges) == len(tree.vertices) - 1
    opt = opt_steiner(g, st.S)
    assert opt <= tree.weight <= (2 + eps) * opt


@pytest.mark.parametrize("seed", range(8))
def test_random_instances_against_exhaustive_oracle(seed):
    rng = random.Random(seed)
    n = 11
    g = DynamicGraph(n)
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < 0.35:
                g.insert_edge(u, v)
    S = rng.sample(range(n), 4)
    try:
        st = SteinerState(g.copy(), S, eps=1, seed=seed)
    except Disconnected:
        assert opt_steiner(g, S) == INF
        return
    check_tree(st, g, eps=1)
    for _ in range(4):
        edges = sorted(g.edges())
        if edges and rng.random() < 0.5:
            e = rng.choice(edges)
            g.delete_edge(*e)
            ev = DeleteEdge(*e)
        else:
            while True:
                u, v = rng.sample(range(n), 2)
                if not g.has_edge(u, v):
                    break
            g.insert_edge(u, v)
            ev = InsertEdge(u, v)
        try:
            steiner_edge_update(st, ev)
        except Disconnected:
            assert opt_steiner(g, st.S) == INF
            continue
        check_tree(st, g, eps=1)


def test_adjacent_pair_is_a_single_edge():
    g = DynamicGraph(5)
    g.insert_edge(1, 2)
    g.insert_edge(2, 3)
    st = SteinerState(g, [1, 2], eps=1, seed=0)
    assert st.tree.weight == 1
    assert st.tree.edges == frozenset({(1, 2)})


def test_star_with_leaf_terminals():
    g = DynamicGraph(6)
    for leaf in range(1, 6):
        g.insert_edge(0, leaf)
    st = SteinerState(g, [1, 2, 3, 4, 5], eps=1, seed=0)
    assert st.tree.weight == 5
    assert set(st.tree.vertices) == set(range(6))


def test_terminal_operations_on_a_path():
    n = 14
    g = DynamicGraph(n)
    for v in range(n - 1):
        g.insert_edge(v, v + 1)
    st = SteinerState(g, [4], eps=1, seed=1)
    assert st.tree.weight == 0
    terminals = [4]

    def span():
        return max(terminals) - min(terminals)

    for v in (9, 2, 12):
        steiner_add_terminal(st, v)
        terminals.append(v)
        assert st.tree.weight == span()
    # adding a vertex already on the tree costs nothing
    steiner_add_terminal(st, 7)
    terminals.append(7)
    assert st.tree.weight == span()
    steiner_remove_terminal(st, 2)
    terminals.remove(2)
    assert st.tree.weight == span()
    while len(terminals) > 1:
        steiner_remove_terminal(st, terminals.pop())
    assert st.tree.weight == 0


def test_terminal_state_errors():
    g = DynamicGraph(4)
    g.insert_edge(0, 1)
    st = SteinerState(g, [0, 1], eps=1, seed=0)
    with pytest.raises(TerminalStateError):
        st.steiner_add_terminal(0)
    with pytest.raises(TerminalStateError):
        st.steiner_remove_terminal(3)


def test_disconnected_reports_the_partition():
    g = DynamicGraph(6)
    g.insert_edge(0, 1)
    g.insert_edge(2, 3)
    with pytest.raises(Disconnected) as err:
        SteinerState(g, [0, 1, 2], eps=1, seed=0)
    groups = err.value.groups
    assert sorted(map(sorted, groups)) == [[0, 1], [2]]


def test_snapshot_serialization():
    g = DynamicGraph(4)
    g.insert_edge(0, 1)
    g.insert_edge(1, 2)
    st = SteinerState(g, [0, 2], eps=1, seed=0)
    text = st.tree.edge_list_text()
    assert text.splitlines()[0] == "# steiner weight=2"
