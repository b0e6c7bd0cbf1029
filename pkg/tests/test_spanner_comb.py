"""Combinatorial spanner: subgraph, stretch, and block-state maintenance."""

import math
import random
from fractions import Fraction

import pytest

from dynsp.estree import DECREMENTAL, INCREMENTAL, ModeViolation
from dynsp.graph import (
    DeleteEdge,
    DynamicGraph,
    InsertEdge,
    all_pairs_dist,
)
from dynsp.spanner_comb import (
    REBUILD,
    RebuildSpanner,
    SpannerState,
    sp_init,
    sp_rebuild_update,
)


def random_graph(n, m, seed):
    rng = random.Random(seed)
    g = DynamicGraph(n)
    edges = set()
    while len(edges) < m:
        u, v = rng.sample(range(n), 2)
        e = (min(u, v), max(u, v))
        if e not in edges:
            edges.add(e)
            g.insert_edge(*e)
    return g, rng


def check_state(st: SpannerState):
    g = st.g
    for u, v in st.H:
        assert g.has_edge(u, v)
    h = DynamicGraph(g.n)
    for u, v in st.H:
        h.insert_edge(u, v)
    dg = all_pairs_dist(g)
    dh = all_pairs_dist(h)
    for i in range(g.n):
        for j in range(g.n):
            if dg[i][j] < math.inf:
                assert dh[i][j] <= (1 + st.eps) * dg[i][j] + st.beta_certificate
    assert st.active == st.recompute_active_from_scratch()


def test_decremental_maintenance_matches_scratch():
    g, rng = random_graph(40, 90, seed=1)
    st = sp_init(g, eps=1, seed=2, mode=DECREMENTAL, k=2)
    check_state(st)
    edges = sorted(g.edges())
    rng.shuffle(edges)
    for step, e in enumerate(edges[:40]):
        delta = st.sp_update(DeleteEdge(*e))
        assert delta["added"].isdisjoint(delta["removed"])
        if step % 5 == 4:
            check_state(st)


def test_incremental_maintenance_matches_scratch():
    g = DynamicGraph(36)
    rng = random.Random(3)
    st = sp_init(g, eps=1, seed=4, mode=INCREMENTAL, k=2)
    present = set()
    for step in range(60):
        while True:
            u, v = rng.sample(range(36), 2)
            e = (min(u, v), max(u, v))
            if e not in present:
                break
        present.add(e)
        st.sp_update(InsertEdge(*e))
        if step % 8 == 7:
            check_state(st)


def test_mode_violations():
    g, _ = random_graph(10, 15, seed=5)
    dec = sp_init(g.copy(), eps=1, seed=0, mode=DECREMENTAL, k=1)
    with pytest.raises(ModeViolation):
        dec.sp_update(InsertEdge(0, 9))
    reb = sp_init(g.copy(), eps=1, seed=0, mode=REBUILD, k=1)
    with pytest.raises(ModeViolation):
        reb.sp_update(DeleteEdge(*sorted(g.edges())[0]))


def test_parameter_domains():
    g = DynamicGraph(4)
    with pytest.raises(ValueError):
        sp_init(g, eps=0, seed=0, mode=DECREMENTAL)
    with pytest.raises(ValueError):
        sp_init(g, eps=2, seed=0, mode=DECREMENTAL)
    with pytest.raises(ValueError):
        sp_init(DynamicGraph(4, directed=True), eps=1, seed=0, mode=DECREMENTAL)


def test_thresholds_are_exact_rationals():
    g = DynamicGraph(8)
    st = sp_init(g, eps=1, seed=1, mode=DECREMENTAL, k=2)
    assert st.eps_prime == Fraction(1, 8)
    assert st.threshold(2, 0) == Fraction(512 - 8, 1)
    assert st.beta_certificate == 2 * 8**3
    assert st.radius_for_level(0) == 8  # capped at n


def test_rebuild_provider_is_lazy_but_faithful():
    g, rng = random_graph(24, 50, seed=6)
    lazy = RebuildSpanner(g.copy(), 1, seed=7, k=2)
    counter = 0
    edges = sorted(g.edges())
    rng.shuffle(edges)
    for e in edges[:10]:
        lazy.apply(DeleteEdge(*e))
        g.delete_edge(*e)
        counter += 1
        eager = sp_rebuild_update(g.copy(), 1, _same_seed(lazy, counter), k=2)
        assert lazy.edges() == set(eager.H)


def _same_seed(lazy: RebuildSpanner, counter: int) -> int:
    from dynsp._kernels import derive_seed

    return derive_seed(lazy.seed, counter)


def test_tree_input_never_underestimates():
    g = DynamicGraph(15)
    for v in range(1, 15):
        g.insert_edge(v, (v - 1) // 2)  # binary tree
    st = sp_init(g, eps=1, seed=8, mode=DECREMENTAL, k=1)
    h = DynamicGraph(15)
    for u, v in st.H:
        h.insert_edge(u, v)
    dg = all_pairs_dist(g)
    dh = all_pairs_dist(h)
    for i in range(15):
        for j in range(15):
            assert dh[i][j] >= dg[i][j]


def test_snapshot_serialization():
    g, _ = random_graph(12, 20, seed=9)
    st = sp_init(g, eps=1, seed=1, mode=DECREMENTAL, k=1)
    text = st.edge_list_text()
    lines = text.strip().splitlines()
    assert lines[0].startswith("#")
    assert len(lines) - 1 == len(st.H)
    edges, beta = st.sp_current()
    assert edges == set(st.H)
    assert beta == st.beta_certificate
