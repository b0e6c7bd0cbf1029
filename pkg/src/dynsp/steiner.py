"""Fully dynamic approximate Steiner tree over a terminal set.

The classic 2-approximation: build the terminal clique weighted by
(approximate) pairwise distances, take its MST, and expand every MST
edge back into an actual path in G.  With a (1+eps/2)-accurate
distance provider the tree weight is within (2+eps) of optimum.

Everything downstream of the distance provider is recomputed per
operation: the closure with |S|^2 distance queries after an edge
event (one new row on terminal addition, none on removal), then the
MST, then the expansion.  Overlapping expanded paths are counted once
because the reported tree is a spanning tree of their union,
extracted by BFS from the lowest-indexed terminal.
"""
from __future__ import annotations

import math
from collections import deque

from .apsp import ApproxApsp
from .graph import DynamicGraph

INF = math.inf


class Disconnected(RuntimeError):
    """The terminal set is split across components; reports the partition."""

    def __init__(self, groups: list[list[int]]) -> None:
        super().__init__(f"terminals split into {len(groups)} groups: {groups}")
        self.groups = groups


class TerminalStateError(ValueError):
    """Adding a present terminal or removing an absent one."""


class SteinerTree:
    """Immutable snapshot: vertex set, edge set, total weight."""

    __slots__ = ("vertices", "edges", "weight")

    def __init__(self, vertices: frozenset, edges: frozenset) -> None:
        self.vertices = vertices
        self.edges = edges
        self.weight = len(edges)

    def edge_list_text(self) -> str:
        lines = [f"# steiner weight={self.weight}"]
        lines += [f"{u} {v}" for u, v in sorted(self.edges)]
        return "\n".join(lines) + "\n"


class SteinerState:
    def __init__(
        self,
        g: DynamicGraph,
        terminals,
        eps=1,
        seed: int = 0,
        provider: ApproxApsp | None = None,
    ) -> None:
        self.provider = provider or ApproxApsp(g, eps / 2, seed=seed)
        self.S: set[int] = set()
        self.closure: dict[int, dict[int, float]] = {}
        for v in sorted(set(terminals)):
            self._add_closure_row(v)
            self.S.add(v)
        self.tree = self._rebuild_tree()

    # ---- closure bookkeeping ----------------------------------------------

    def _add_closure_row(self, v: int) -> None:
        self.closure[v] = {}
        for w in self.S:
            d = self.provider.approx_dist(v, w)
            self.closure[v][w] = d
            self.closure[w][v] = d

    def _recompute_closure(self) -> None:
        terms = sorted(self.S)
        self.closure = {v: {} for v in terms}
        for a_idx, a in enumerate(terms):
            for b2 in terms[a_idx + 1 :]:
                d = self.provider.approx_dist(a, b2)
                self.closure[a][b2] = d
                self.closure[b2][a] = d

    # ---- operations --------------------------------------------------------

    def steiner_edge_update(self, ev) -> SteinerTree:
        self.provider.apply(ev)
        self._recompute_closure()
        self.tree = self._rebuild_tree()
        return self.tree

    def steiner_add_terminal(self, v: int) -> SteinerTree:
        if v in self.S:
            raise TerminalStateError(f"terminal {v} already present")
        self._add_closure_row(v)
        self.S.add(v)
        self.tree = self._rebuild_tree()
        return self.tree

    def steiner_remove_terminal(self, v: int) -> SteinerTree:
        if v not in self.S:
            raise TerminalStateError(f"terminal {v} not present")
        self.S.discard(v)
        del self.closure[v]
        for row in self.closure.values():
            row.pop(v, None)
        self.tree = self._rebuild_tree()
        return self.tree

    # ---- construction ------------------------------------------------------

    def _terminal_groups(self) -> list[list[int]]:
        """Connected groups of terminals under finite closure distances."""
        terms = sorted(self.S)
        seen: set[int] = set()
        groups = []
        for t in terms:
            if t in seen:
                continue
            grp = [t]
            seen.add(t)
            stack = [t]
            while stack:
                a = stack.pop()
                for b2, d in self.closure[a].items():
                    if b2 not in seen and d < INF:
                        seen.add(b2)
                        grp.append(b2)
                        stack.append(b2)
            groups.append(sorted(grp))
        return groups

    def _mst_edges(self) -> list[tuple[int, int]]:
        """Kruskal on the terminal clique, deterministic (w, a, b) order."""
        terms = sorted(self.S)
        cand = sorted(
            (self.closure[a][b2], a, b2)
            for i, a in enumerate(terms)
            for b2 in terms[i + 1 :]
        )
        parent = {t: t for t in terms}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        out = []
        for w, a, b2 in cand:
            ra, rb = find(a), find(b2)
            if ra != rb:
                parent[ra] = rb
                out.append((a, b2))
        return out

    def _rebuild_tree(self) -> SteinerTree:
        if len(self.S) <= 1:
            return SteinerTree(frozenset(self.S), frozenset())
        groups = self._terminal_groups()
        if len(groups) > 1:
            raise Disconnected(groups)
        union: dict[int, set[int]] = {}
        for a, b2 in self._mst_edges():
            path = self.provider.approx_path(a, b2)
            for x, y in zip(path, path[1:]):
                union.setdefault(x, set()).add(y)
                union.setdefault(y, set()).add(x)
        root = min(self.S)
        parent = {root: None}
        q = deque([root])
        while q:
            u = q.popleft()
            for v in sorted(union.get(u, ())):
                if v not in parent:
                    parent[v] = u
                    q.append(v)
        missing = self.S - parent.keys()
        if missing:  # distances said connected, paths disagreed
            raise Disconnected(sorted([sorted(missing), sorted(self.S - missing)]))
        edges = frozenset(
            (v, p) if v < p else (p, v) for v, p in parent.items() if p is not None
        )
        return SteinerTree(frozenset(parent), edges)


def steiner_edge_update(st: SteinerState, ev) -> SteinerTree:
    return st.steiner_edge_update(ev)


def steiner_add_terminal(st: SteinerState, v: int) -> SteinerTree:
    return st.steiner_add_terminal(v)


def steiner_remove_terminal(st: SteinerState, v: int) -> SteinerTree:
    return st.steiner_remove_terminal(v)
