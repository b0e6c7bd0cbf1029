"""Distance queries, successor extraction, and short-path reporting.

Distances up to D are read off the min-degree of maintained inverse
entries.  Successors come from witness sums: for a copy with column
mask S, the value sum_{s in S, (i,s) edge} rho_is * M^-1[s, j] has
min-degree d-1 exactly when S contains a shortest-path successor of i
towards j (rho_is are fixed random field constants, so accidental
cancellation has probability ~1/p).  Bit-level masks recover the
successor index; column samples of every power-of-two size sparsify
the witness set when there are many successors.

The copies are never materialized as separate product states: every
copy is defined by (current edge set, static column mask, rho table),
so all copy values for one (i, j) query reduce to a single masked
matrix product over the witness vector.  This is algebraically the
same E*M^-1 = V(I+N) invariant the explicit product module maintains
(the tests cross-check the two), just evaluated lazily, which keeps
thousands of copies affordable.

Candidates are always verified against the graph and a distance query,
so randomness failures surface as NoWitnessFound, never wrong answers.
"""
from __future__ import annotations

import math

import numpy as np

from ._kernels import mat_mul_mod, min_degree_arr, mul_mod, rand_unit
from .graph import DynamicGraph
from .inverse import DEFAULT_KAPPA, InverseState
from .polymat import encode
from .ring import FieldParams


class _Beyond:
    """Sentinel for distances exceeding the degree bound D."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "Beyond"


BEYOND = _Beyond()


class NoWitnessFound(RuntimeError):
    """No successor candidate verified; a low-probability randomness failure.

    Recovery path: rebuild the reporter with a fresh seed (fixed
    randomness means an identical retry would fail identically).
    """

    def __init__(self, i: int, j: int, seed: int) -> None:
        super().__init__(f"no verified successor for ({i}, {j}); seed {seed}")
        self.pair = (i, j)
        self.seed = seed


class PathReporter:
    def __init__(
        self,
        g: DynamicGraph,
        D: int,
        kappa: float = DEFAULT_KAPPA,
        seed: int = 0,
        reps: int | None = None,
        params: FieldParams | None = None,
    ) -> None:
        self.g = g
        self.D = D
        self.seed = seed
        self.params = params or FieldParams(rng_seed=seed)
        self.host = InverseState(encode(g, self.params, D), kappa)
        n = g.n
        self.L = max(1, math.ceil(math.log2(n))) if n > 1 else 1
        self.reps = reps if reps is not None else 3 * self.L
        self._rho = self._build_rho()
        self.copy_masks, self._groups = self._build_masks()

    # ---- construction -----------------------------------------------------

    def _build_rho(self) -> np.ndarray:
        n, p = self.g.n, self.params.p
        rho = np.empty((n, n), dtype=np.uint64)
        for i in range(n):
            for j in range(n):
                rho[i, j] = rand_unit(p, self.params.rng_seed, 0x57, i * n + j)
        return rho

    def _build_masks(self):
        """Stack of column masks: global bit copies, then sampled groups."""
        n, L = self.g.n, self.L
        cols = np.arange(n)
        bit_masks = np.stack([(cols >> l) & 1 == 1 for l in range(L)])
        groups = [(0, None, None)]  # (offset, w, rep); None marks the full set
        stacks = [bit_masks]
        offset = L
        rng = np.random.default_rng(self.params.rng_seed ^ 0xA5A5A5A5)
        for w in range(L):
            size = min(1 << w, n)
            for rep in range(self.reps):
                sample = rng.choice(n, size=size, replace=False)
                base = np.zeros(n, dtype=bool)
                base[sample] = True
                stacks.append(bit_masks & base)
                groups.append((offset, w, rep))
                offset += L
        return np.concatenate(stacks, axis=0), groups

    def bitcopy_E(self, copy_index: int) -> np.ndarray:
        """The explicit E matrix of one copy (test hook, small n only)."""
        n, dp1 = self.g.n, self.D + 1
        E = np.zeros((n, n, dp1), dtype=np.uint64)
        mask = self.copy_masks[copy_index]
        for i in range(n):
            for s in self.g.adj[i]:
                if mask[s]:
                    E[i, s, 0] = self._rho[i, s]
        return E

    # ---- updates -----------------------------------------------------------

    def pr_insert(self, u: int, v: int) -> None:
        self.g.insert_edge(u, v)
        self.host.update_edge(u, v, True)
        if not self.g.directed:
            self.host.update_edge(v, u, True)

    def pr_delete(self, u: int, v: int) -> None:
        self.g.delete_edge(u, v)
        self.host.update_edge(u, v, False)
        if not self.g.directed:
            self.host.update_edge(v, u, False)

    def apply(self, ev) -> None:
        from .graph import DeleteEdge, InsertEdge

        if isinstance(ev, InsertEdge):
            self.pr_insert(ev.u, ev.v)
        elif isinstance(ev, DeleteEdge):
            self.pr_delete(ev.u, ev.v)
        else:
            raise TypeError(f"not an edge event: {ev!r}")

    # ---- queries -----------------------------------------------------------

    def _entry_min_degree(self, i: int, j: int) -> int:
        return int(min_degree_arr(self.host._query_raw(i, j)))

    def pr_dist(self, i: int, j: int):
        if i == j:
            return 0
        d = self._entry_min_degree(i, j)
        return d if d <= self.D else BEYOND

    def dist_matrix(self) -> np.ndarray:
        """min-degrees of the full inverse; D+1 encodes beyond-D (test/apsp hook)."""
        md = min_degree_arr(self.host.query_full())
        np.fill_diagonal(md, 0)
        return md

    def copy_values(self, i: int, j: int) -> np.ndarray:
        """(num_copies, D+1) witness sums for the pair (i, j), all copies."""
        p = self.params.p
        nbrs = sorted(self.g.adj[i])
        dp1 = self.D + 1
        if not nbrs:
            return np.zeros((self.copy_masks.shape[0], dp1), dtype=np.uint64)
        col = self.host.query_col(j, rows=nbrs)              # (deg, D+1)
        q = mul_mod(self._rho[i, nbrs][:, None], col, p)      # witness vector
        sel = self.copy_masks[:, nbrs].astype(np.uint64)
        return mat_mul_mod(sel, q, p)

    def pr_successor(self, i: int, j: int) -> int:
        d = self.pr_dist(i, j)
        if d is BEYOND or d == 0:
            raise ValueError(f"pr_successor needs 1 <= dist <= D, got {d!r}")
        return self._successor(i, j, d)

    def _successor(self, i: int, j: int, d: int) -> int:
        if d == 1:
            return j
        mdeg = min_degree_arr(self.copy_values(i, j))
        hits = mdeg == d - 1
        n, L = self.g.n, self.L
        seen: set[int] = set()
        candidates: list[int] = []
        for offset, _w, _rep in self._groups:
            bits = hits[offset : offset + L]
            for cand in (
                sum(1 << l for l in range(L) if bits[l]),
                sum(1 << l for l in range(L) if not bits[l]),  # complement guard
            ):
                if cand < n and cand not in seen:
                    seen.add(cand)
                    candidates.append(cand)
        for s in candidates:
            if s in self.g.adj[i] and self._entry_min_degree(s, j) == d - 1:
                return s
        raise NoWitnessFound(i, j, self.params.rng_seed)

    def pr_path(self, i: int, j: int) -> list[int]:
        d = self.pr_dist(i, j)
        if d is BEYOND:
            raise ValueError(f"pr_path needs dist <= D for ({i}, {j})")
        path = [i]
        cur = i
        while d > 0:
            cur = self._successor(cur, j, d)
            path.append(cur)
            d -= 1
        return path
