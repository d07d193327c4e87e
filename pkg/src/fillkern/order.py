"""Nested dissection with minimum-degree leaves, and the reduce/order/map-back driver."""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from . import _kernels
from .eliminate import EliminationStats, symbolic_factor
from .graph import DynamicGraph
from .reduce import PipelineConfig, reconstruct_ordering, run_pipeline


@dataclass(frozen=True)
class NDConfig:
    recursion_limit: int = 120
    epsilon: float = 0.2
    seed: int = 1
    trials: int = 3

    def __post_init__(self):
        if self.recursion_limit < 1:
            raise ValueError("recursion_limit must be >= 1")
        if not 0.0 <= self.epsilon <= 1.0:
            raise ValueError("epsilon must lie in [0, 1]")


@dataclass
class SeparatorResult:
    v1: list[int]
    v2: list[int]
    s: list[int]


def min_degree_order(g: DynamicGraph) -> list[int]:
    """Exact minimum degree on an explicit elimination graph; ties to lowest id."""
    work = g.copy()
    heap = [(work.degree(v), v) for v in work.alive]
    heapq.heapify(heap)
    order = []
    while heap:
        d, v = heapq.heappop(heap)
        if not work.is_alive(v) or work.degree(v) != d:
            continue
        nbrs = work.neighbors(v)
        work.eliminate_node(v)
        order.append(v)
        for u in nbrs:
            heapq.heappush(heap, (work.degree(u), u))
    return order


# ----------------------------------------------------------------- separator


class _Local:
    """Dense CSR view of the alive part of a graph."""

    def __init__(self, g: DynamicGraph, nodes: list[int]):
        self.nodes = nodes
        idx = {v: i for i, v in enumerate(nodes)}
        self.adj = [[idx[u] for u in sorted(g.neighbor_set(v)) if u in idx] for v in nodes]
        self.indptr = np.zeros(len(nodes) + 1, dtype=np.int64)
        np.cumsum([len(a) for a in self.adj], out=self.indptr[1:])
        self.indices = np.fromiter(
            (u for a in self.adj for u in a), dtype=np.int64, count=int(self.indptr[-1])
        )

    @property
    def n(self) -> int:
        return len(self.nodes)

    def bfs(self, sources, mask=None) -> np.ndarray:
        if mask is None:
            mask = np.ones(self.n, dtype=bool)
        return _kernels.bfs_distances(self.indptr, self.indices, np.asarray(sources), mask)

    def components(self) -> list[np.ndarray]:
        label = np.full(self.n, -1, dtype=np.int64)
        comps = []
        for s in range(self.n):
            if label[s] >= 0:
                continue
            members = np.flatnonzero(self.bfs([s]) >= 0)
            label[members] = len(comps)
            comps.append(members)
        return comps


def _grow_bisection(loc: _Local, seed_node: int) -> np.ndarray:
    """BFS region growing from a pseudo-peripheral node; side 0 gets ceil(n/2)."""
    far = seed_node
    for _ in range(2):
        dist = loc.bfs([far])
        far = int(np.argmax(dist))
    dist = loc.bfs([far])
    # unreached components follow in id order
    dist = np.where(dist < 0, dist.max() + 1 + np.arange(loc.n), dist)
    order = np.lexsort((np.arange(loc.n), dist))
    part = np.ones(loc.n, dtype=np.int8)
    part[order[: (loc.n + 1) // 2]] = 0
    return part


def _cut(loc: _Local, part: np.ndarray) -> int:
    src = np.repeat(np.arange(loc.n), np.diff(loc.indptr))
    return int((part[src] != part[loc.indices]).sum()) // 2


def _fm_refine(loc: _Local, part: np.ndarray, max_side: int, passes: int = 6, patience: int = 60) -> np.ndarray:
    """Fiduccia-Mattheyses moves on the edge cut under a side-size cap."""
    adj = loc.adj
    part = part.copy()
    for _ in range(passes):
        size = [int((part == 0).sum()), int((part == 1).sum())]
        gain = np.zeros(loc.n, dtype=np.int64)
        for v in range(loc.n):
            pv = part[v]
            for u in adj[v]:
                gain[v] += 1 if part[u] != pv else -1
        heap = [(-int(gain[v]), v) for v in range(loc.n)]
        heapq.heapify(heap)
        moved = np.zeros(loc.n, dtype=bool)
        cut = _cut(loc, part)
        best_cut, best_imb, best_len = cut, abs(size[0] - size[1]), 0
        log = []
        since = 0
        while heap and since < patience:
            g_neg, v = heapq.heappop(heap)
            if moved[v] or -g_neg != gain[v]:
                continue
            src, dst = part[v], 1 - part[v]
            if size[dst] + 1 > max_side:
                continue
            moved[v] = True
            part[v] = dst
            size[src] -= 1
            size[dst] += 1
            cut -= int(gain[v])
            log.append(v)
            for u in adj[v]:
                if moved[u]:
                    continue
                gain[u] += 2 if part[u] == src else -2
                heapq.heappush(heap, (-int(gain[u]), u))
            imb = abs(size[0] - size[1])
            if cut < best_cut or (cut == best_cut and imb < best_imb):
                best_cut, best_imb, best_len = cut, imb, len(log)
                since = 0
            else:
                since += 1
        for v in log[best_len:]:
            part[v] = 1 - part[v]
        if best_len == 0:
            break
    return part


def _vertex_cover_split(loc: _Local, part: np.ndarray):
    """Minimum vertex cover of the cut edges; picks the more balanced cover."""
    side_a = {v for v in range(loc.n) if part[v] == 0 and any(part[u] == 1 for u in loc.adj[v])}
    side_b = {v for v in range(loc.n) if part[v] == 1 and any(part[u] == 0 for u in loc.adj[v])}
    if not side_a:
        return [np.flatnonzero(part == 0), np.flatnonzero(part == 1), np.array([], dtype=np.int64)]
    left, right = sorted(side_a), sorted(side_b)
    li = {v: i for i, v in enumerate(left)}
    ri = {v: i for i, v in enumerate(right)}
    rows, cols = [], []
    for v in left:
        for u in loc.adj[v]:
            if part[u] == 1:
                rows.append(li[v])
                cols.append(ri[u])
    bi = csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(len(left), len(right)))

    def konig(mat, L, R):
        match_l = maximum_bipartite_matching(mat, perm_type="column")
        match_r = np.full(len(R), -1, dtype=np.int64)
        for i, j in enumerate(match_l):
            if j >= 0:
                match_r[j] = i
        seen_l = np.zeros(len(L), dtype=bool)
        seen_r = np.zeros(len(R), dtype=bool)
        stack = [i for i in range(len(L)) if match_l[i] < 0]
        seen_l[stack] = True
        while stack:
            i = stack.pop()
            for j in mat.indices[mat.indptr[i]:mat.indptr[i + 1]]:
                if not seen_r[j]:
                    seen_r[j] = True
                    k = match_r[j]
                    if k >= 0 and not seen_l[k]:
                        seen_l[k] = True
                        stack.append(k)
        return [L[i] for i in range(len(L)) if not seen_l[i]] + [R[j] for j in range(len(R)) if seen_r[j]]

    best = None
    for cover in (konig(bi, left, right), konig(bi.T.tocsr(), right, left)):
        in_s = np.zeros(loc.n, dtype=bool)
        in_s[cover] = True
        v1 = np.flatnonzero((part == 0) & ~in_s)
        v2 = np.flatnonzero((part == 1) & ~in_s)
        key = (len(cover), max(len(v1), len(v2)))
        if best is None or key < best[0]:
            best = (key, [v1, v2, np.flatnonzero(in_s)])
    return best[1]


def find_separator(g: DynamicGraph, cfg: NDConfig = NDConfig()) -> SeparatorResult:
    """Balanced node separator: region growing, FM on the edge cut, then a vertex cover."""
    nodes = g.alive
    if len(nodes) < 2:
        raise ValueError("separator needs at least two nodes")
    loc = _Local(g, nodes)
    n = loc.n
    max_side = max(1, math.floor((1 + cfg.epsilon) * math.ceil(n / 2)))

    comps = loc.components()
    if len(comps) > 1:
        sides: list[list[int]] = [[], []]
        for comp in sorted(comps, key=lambda c: (-len(c), int(c[0]))):
            sides[0 if len(sides[0]) <= len(sides[1]) else 1].extend(comp.tolist())
        if max(map(len, sides)) <= max_side:
            return SeparatorResult(
                sorted(nodes[i] for i in sides[0]), sorted(nodes[i] for i in sides[1]), []
            )

    rng = np.random.default_rng(cfg.seed)
    seeds = [0] + [int(x) for x in rng.integers(0, n, size=max(0, cfg.trials - 1))]
    best = None
    for s in seeds:
        part = _fm_refine(loc, _grow_bisection(loc, s), max_side)
        v1, v2, sep = _vertex_cover_split(loc, part)
        key = (len(sep), max(len(v1), len(v2)))
        if best is None or key < best[0]:
            best = (key, (v1, v2, sep))
    v1, v2, sep = best[1]
    return SeparatorResult(
        sorted(nodes[i] for i in v1), sorted(nodes[i] for i in v2), sorted(nodes[i] for i in sep)
    )


def check_separator(g: DynamicGraph, res: SeparatorResult, epsilon: float) -> None:
    alive = set(g.alive)
    parts = [set(res.v1), set(res.v2), set(res.s)]
    assert sum(map(len, parts)) == len(alive) and set().union(*parts) == alive
    for v in res.v1:
        assert not (g.neighbor_set(v) & parts[1]), "edge between the two blocks"
    cap = math.floor((1 + epsilon) * math.ceil(len(alive) / 2))
    assert len(res.v1) <= max(1, cap) and len(res.v2) <= max(1, cap)


# ---------------------------------------------------------- nested dissection


def nested_dissection(g: DynamicGraph, cfg: NDConfig = NDConfig()) -> list[int]:
    """Order blocks before their separator, recursing down to the limit."""
    if g.num_alive() < cfg.recursion_limit or g.num_alive() < 2:
        return min_degree_order(g)
    res = find_separator(g, cfg)
    n = g.num_alive()
    if max(len(res.v1), len(res.v2), len(res.s)) == n:
        return min_degree_order(g)
    order = []
    for block in (res.v1, res.v2, res.s):
        if block:
            order.extend(nested_dissection(g.induced(block), cfg))
    return order


def reduced_nested_dissection(
    g: DynamicGraph,
    pipeline: PipelineConfig = PipelineConfig(),
    nd: NDConfig = NDConfig(),
) -> tuple[list[int], EliminationStats]:
    """Reduce, order the kernel by nested dissection, map back, and measure on ``g``."""
    kernel, ledger = run_pipeline(g, pipeline)
    order = reconstruct_ordering(ledger, nested_dissection(kernel, nd))
    return order, symbolic_factor(g, order)
