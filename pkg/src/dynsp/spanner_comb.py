"""Partially dynamic (1+eps, beta)-spanner via levels, balls, and blocks.

Every vertex gets a level: A_0 = V and each higher level subsamples the
one below so that membership in A_i has marginal probability
min(1, n^(-i/k) * ln n).  A vertex a at level i is ACTIVE when no
vertex of a higher level j sits within distance
eps'^-(j+1) - eps'^-(i+1) of it (eps' = eps/8).  Each active vertex
maintains an Even-Shiloach ball of radius ceil(eps'^-(i+1)); the
spanner H is the union of the active balls' shortest-path tree edges,
reference-counted because trees overlap.

Blocks make activeness maintainable: an active high-level vertex
"blocks" every in-threshold lower-level ball member, and revokes the
block when the distance outgrows the threshold.  A vertex is active
iff it holds no blocks.  Activeness is monotone per mode: deletions
only activate, insertions only deactivate.

The fully dynamic variant simply reruns the static construction after
every update (sp_rebuild_update); RebuildSpanner wraps that with lazy
evaluation so consumers that only look at H at query time skip
untouched rebuilds.

All thresholds are compared as exact rationals; ball radii take the
ceiling.
"""
from __future__ import annotations

import math
from fractions import Fraction

from ._kernels import derive_seed
from .estree import DECREMENTAL, INCREMENTAL, EsTree, ModeViolation
from .graph import DeleteEdge, DynamicGraph, InsertEdge, apply_update, bfs_dist_bounded

REBUILD = "rebuild"


class SpannerState:
    def __init__(
        self,
        g: DynamicGraph,
        eps,
        seed: int,
        mode: str = REBUILD,
        k: int | None = None,
    ) -> None:
        if not 0 < float(eps) <= 1:
            raise ValueError("need 0 < eps <= 1")
        if mode not in (DECREMENTAL, INCREMENTAL, REBUILD):
            raise ValueError(f"unknown mode {mode!r}")
        if g.directed:
            raise ValueError("spanners are defined for undirected graphs")
        self.g = g
        self.mode = mode
        self.eps = Fraction(eps)
        self.eps_prime = self.eps / 8
        n = g.n
        log2n = max(1.0, math.log2(n))
        self.k = k if k is not None else max(1, math.ceil(math.sqrt(log2n)))
        self.seed = seed
        self.level = self._sample_levels()
        self.beta_certificate = 2 * math.ceil(self.eps_prime ** -(self.k + 1))
        self.active: dict[int, bool] = {}
        self.balls: dict[int, EsTree] = {}
        self.tree_edges: dict[int, set] = {}
        self.blocks_of: dict[int, set[int]] = {v: set() for v in range(n)}
        self.H: dict[tuple[int, int], int] = {}
        self._init_active()

    # ---- static construction ----------------------------------------------

    def _sample_levels(self) -> list[int]:
        """level[v] = max i with v in A_i; nested subsampling, exact marginals."""
        import numpy as np

        n = self.g.n
        rng = np.random.default_rng(derive_seed(self.seed, 0x5E))
        level = [0] * n
        prev_prob = 1.0
        alive = list(range(n))
        for i in range(1, self.k + 1):
            prob = min(1.0, n ** (-i / self.k) * math.log(n)) if n > 1 else 1.0
            keep_p = prob / prev_prob if prev_prob > 0 else 0.0
            coins = rng.random(len(alive))
            alive = [v for v, c in zip(alive, coins) if c < keep_p]
            for v in alive:
                level[v] = i
            prev_prob = prob
        return level

    def radius_for_level(self, i: int) -> int:
        return min(self.g.n, math.ceil(self.eps_prime ** -(i + 1)))

    def threshold(self, j: int, i: int) -> Fraction:
        """Blocking threshold between a level-j blocker and level-i blockee."""
        return self.eps_prime ** -(j + 1) - self.eps_prime ** -(i + 1)

    def recompute_active_from_scratch(self) -> dict[int, bool]:
        """Evaluate the activeness predicate directly from BFS distances."""
        blocked = set()
        for a in range(self.g.n):
            j = self.level[a]
            if j == 0:
                continue
            reach = bfs_dist_bounded(self.g, a, math.floor(self.threshold(j, 0)))
            for x, dx in reach.items():
                i = self.level[x]
                if i < j and Fraction(dx) <= self.threshold(j, i):
                    blocked.add(x)
        return {v: v not in blocked for v in range(self.g.n)}

    def _init_active(self) -> None:
        self.active = self.recompute_active_from_scratch()
        tree_mode = DECREMENTAL if self.mode == REBUILD else self.mode
        for a, is_active in self.active.items():
            if is_active:
                tree = EsTree(self.g, a, self.radius_for_level(self.level[a]), tree_mode)
                self.balls[a] = tree
                self._record_blocks(a, tree)
        for v in range(self.g.n):
            # the maximal-level blocker of a blocked vertex is itself active,
            # so block bookkeeping from active balls must cover the predicate
            assert self.active[v] == (not self.blocks_of[v]), "block invariant"
        for a, tree in self.balls.items():
            self._adopt_tree_edges(a, tree)

    def _record_blocks(self, a: int, tree: EsTree) -> None:
        j = self.level[a]
        for x, dx in tree.level.items():
            i = self.level[x]
            if i < j and Fraction(dx) <= self.threshold(j, i):
                self.blocks_of[x].add(a)

    def _adopt_tree_edges(self, a: int, tree: EsTree) -> None:
        edges = tree.tree_edges()
        old = self.tree_edges.get(a, set())
        for e in edges - old:
            self.H[e] = self.H.get(e, 0) + 1
        for e in old - edges:
            self.H[e] -= 1
            if self.H[e] == 0:
                del self.H[e]
        self.tree_edges[a] = edges
        tree.dirty = False

    def _release_tree(self, a: int) -> None:
        for e in self.tree_edges.pop(a, set()):
            self.H[e] -= 1
            if self.H[e] == 0:
                del self.H[e]

    # ---- dynamic maintenance ----------------------------------------------

    def sp_update(self, ev) -> dict:
        """Apply one edge event; returns {'added': set, 'removed': set}."""
        if self.mode == DECREMENTAL and not isinstance(ev, DeleteEdge):
            raise ModeViolation("decremental spanner got a non-deletion")
        if self.mode == INCREMENTAL and not isinstance(ev, InsertEdge):
            raise ModeViolation("incremental spanner got a non-insertion")
        if self.mode == REBUILD:
            raise ModeViolation("rebuild-mode states are immutable; use sp_rebuild_update")
        before = set(self.H)
        apply_update(self.g, ev)
        deleting = isinstance(ev, DeleteEdge)
        for a, tree in list(self.balls.items()):
            changes = (
                tree.es_delete(ev.u, ev.v) if deleting else tree.es_insert(ev.u, ev.v)
            )
            self._apply_block_changes(a, changes)
        if deleting:
            self._cascade_activations()
        else:
            self._cascade_deactivations()
        for a, tree in self.balls.items():
            if tree.dirty:
                self._adopt_tree_edges(a, tree)
        after = set(self.H)
        return {"added": after - before, "removed": before - after}

    def _apply_block_changes(self, a: int, changes: dict) -> None:
        j = self.level[a]
        for x, (old, new) in changes.items():
            i = self.level[x]
            if i >= j:
                continue
            thr = self.threshold(j, i)
            was = old is not None and Fraction(old) <= thr
            now = new is not None and Fraction(new) <= thr
            if was and not now:
                self.blocks_of[x].discard(a)
            elif now and not was:
                self.blocks_of[x].add(a)

    def _cascade_activations(self) -> None:
        # deletions only revoke blocks; vertices whose last block went away
        # turn active, build a ball, and record their own (pre-existing) blocks
        newly = sorted(
            v for v in range(self.g.n) if not self.active[v] and not self.blocks_of[v]
        )
        for v in newly:
            self.active[v] = True
            tree = EsTree(self.g, v, self.radius_for_level(self.level[v]), self.mode)
            self.balls[v] = tree
            tree.dirty = True
            self._record_blocks(v, tree)

    def _cascade_deactivations(self) -> None:
        newly = sorted(
            v for v in range(self.g.n) if self.active[v] and self.blocks_of[v]
        )
        for v in newly:
            # blocks already invoked by v stay valid (distances only shrink
            # in incremental mode), but its ball leaves the spanner
            self.active[v] = False
            self.balls.pop(v)
            self._release_tree(v)

    # ---- snapshots ---------------------------------------------------------

    def sp_current(self) -> tuple[set, int]:
        return set(self.H), self.beta_certificate

    def edge_list_text(self) -> str:
        lines = [f"# spanner |H|={len(self.H)} beta={self.beta_certificate}"]
        lines += [f"{u} {v}" for u, v in sorted(self.H)]
        return "\n".join(lines) + "\n"


def sp_init(g, eps, seed, mode, k=None) -> SpannerState:
    return SpannerState(g, eps, seed, mode, k=k)


def sp_update(st: SpannerState, ev) -> dict:
    return st.sp_update(ev)


def sp_current(st: SpannerState):
    return st.sp_current()


def sp_rebuild_update(g, eps, seed, k=None) -> SpannerState:
    """Fully dynamic variant: one static construction on the current graph."""
    return SpannerState(g, eps, seed, REBUILD, k=k)


class RebuildSpanner:
    """Fully dynamic provider that reruns the static construction per update.

    Rebuilds lazily at snapshot time: the spanner handed out is
    identical to rebuilding eagerly after every update, but updates
    that nobody observes don't pay for a construction.
    """

    def __init__(self, g: DynamicGraph, eps, seed: int, k: int | None = None) -> None:
        self.g = g
        self.eps = eps
        self.seed = seed
        self.k = k
        self._counter = 0
        self._state: SpannerState | None = None

    @property
    def beta_certificate(self) -> int:
        return self._ensure().beta_certificate

    def apply(self, ev) -> None:
        apply_update(self.g, ev)
        self._counter += 1
        self._state = None

    def _ensure(self) -> SpannerState:
        if self._state is None:
            self._state = sp_rebuild_update(
                self.g, self.eps, derive_seed(self.seed, self._counter), k=self.k
            )
        return self._state

    def edges(self) -> set:
        return set(self._ensure().H)

    def subgraph(self) -> DynamicGraph:
        h = DynamicGraph(self.g.n, directed=False)
        for u, v in self.edges():
            h.insert_edge(u, v)
        return h
