"""Exact minimum fill-in for small graphs, plus small-graph catalogs.

The elimination graph after eliminating a node set X does not depend on the
order inside X, so minimum fill-in is a shortest path over subsets. Graphs are
handled as tuples of adjacency bitmasks over a dense relabelling.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .graph import DynamicGraph
from .reduce import PREFIX_KINDS, ReductionLedger, Rule, reconstruct_ordering

MAX_ORACLE_NODES = 12


class OracleTooLarge(ValueError):
    pass


@dataclass
class OracleResult:
    phi: int
    witness: list[int]


def _to_bits(g: DynamicGraph) -> tuple[list[int], list[int]]:
    ids = g.alive
    idx = {v: i for i, v in enumerate(ids)}
    adj = [0] * len(ids)
    for v in ids:
        for u in g.neighbor_set(v):
            adj[idx[v]] |= 1 << idx[u]
    return ids, adj


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _deficiency(adj: Sequence[int], x: int) -> int:
    nb = adj[x]
    missing = 0
    for u in _bits(nb):
        missing += (nb & ~adj[u] & ~(1 << u)).bit_count()
    return missing // 2


def _eliminate(adj: Sequence[int], x: int) -> list[int]:
    nb = adj[x]
    out = list(adj)
    clear = ~(1 << x)
    for u in _bits(nb):
        out[u] = (out[u] | nb) & ~(1 << u) & clear
    out[x] = 0
    return out


def brute_force_phi(g: DynamicGraph) -> OracleResult:
    """Minimum fill-in by memoized search over remaining node sets."""
    ids, adj0 = _to_bits(g)
    k = len(ids)
    if k > MAX_ORACLE_NODES:
        raise OracleTooLarge(f"oracle limited to {MAX_ORACLE_NODES} nodes, got {k}")
    memo: dict[int, tuple[int, int]] = {0: (0, -1)}

    def solve(remaining: int, adj: list[int]) -> int:
        hit = memo.get(remaining)
        if hit is not None:
            return hit[0]
        cands = sorted((_deficiency(adj, x), x) for x in _bits(remaining))
        if cands[0][0] == 0:
            # a simplicial node can always go first
            x = cands[0][1]
            best = solve(remaining & ~(1 << x), _eliminate(adj, x))
            memo[remaining] = (best, x)
            return best
        best, arg = None, -1
        for d, x in cands:
            if best is not None and d >= best:
                break
            val = d + solve(remaining & ~(1 << x), _eliminate(adj, x))
            if best is None or val < best:
                best, arg = val, x
        memo[remaining] = (best, arg)
        return best

    full = (1 << k) - 1
    phi = solve(full, adj0)
    witness, rem = [], full
    while rem:
        x = memo[rem][1]
        witness.append(ids[x])
        rem &= ~(1 << x)
    return OracleResult(phi, witness)


def phi_by_enumeration(g: DynamicGraph) -> int:
    """Minimum fill-in by trying every ordering; only for tiny graphs."""
    ids, adj0 = _to_bits(g)
    best = None
    for perm in itertools.permutations(range(len(ids))):
        adj, fill = adj0, 0
        for x in perm:
            fill += _deficiency(adj, x)
            if best is not None and fill >= best:
                break
            adj = _eliminate(adj, x)
        else:
            best = fill if best is None else min(best, fill)
    return best or 0


def phi_after(g: DynamicGraph, x: int) -> int:
    h = g.copy()
    h.eliminate_node(x)
    return brute_force_phi(h).phi


# ------------------------------------------------------------------ catalogs


def _connected(n: int, edges: Sequence[tuple[int, int]]) -> bool:
    adj = [0] * n
    for u, v in edges:
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    seen, frontier = 1, 1
    while frontier:
        nxt = 0
        for u in _bits(frontier):
            nxt |= adj[u]
        frontier = nxt & ~seen
        seen |= nxt
    return seen == (1 << n) - 1


def enumerate_small_graphs(n: int) -> Iterator[DynamicGraph]:
    """All connected labeled graphs on ``n`` nodes (not isomorphism-reduced)."""
    if n > 7:
        raise ValueError("enumeration limited to n <= 7")
    if n < 1:
        return
    pairs = list(itertools.combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        edges = [p for i, p in enumerate(pairs) if mask >> i & 1]
        if _connected(n, edges):
            yield DynamicGraph(n, edges)


def random_connected_graph(n: int, rng: np.random.Generator, p: float | None = None) -> DynamicGraph:
    """Random spanning tree plus independent extra edges with probability ``p``."""
    if p is None:
        p = float(rng.uniform(0.15, 0.7))
    perm = rng.permutation(n)
    edges = {tuple(sorted((int(perm[i]), int(perm[rng.integers(i)])))) for i in range(1, n)}
    for u, v in itertools.combinations(range(n), 2):
        if rng.random() < p:
            edges.add((u, v))
    return DynamicGraph(n, sorted(edges))


def is_two_edge_connected(g: DynamicGraph) -> bool:
    ids = g.alive
    if len(ids) < 3:
        return False
    edges = list(g.edges())
    for e in edges:
        rest = [f for f in edges if f != e]
        idx = {v: i for i, v in enumerate(ids)}
        if not _connected(len(ids), [(idx[a], idx[b]) for a, b in rest]):
            return False
    return True


def random_two_edge_connected_graph(n: int, rng: np.random.Generator) -> DynamicGraph:
    """A random ear-decomposition graph: a cycle plus ears, then sparse chords."""
    while True:
        order = [int(v) for v in rng.permutation(n)]
        k = int(rng.integers(3, n + 1))
        edges = {tuple(sorted((order[i], order[(i + 1) % k]))) for i in range(k)}
        placed = order[:k]
        rest = order[k:]
        while rest:
            length = int(rng.integers(1, len(rest) + 1))
            ear, rest = rest[:length], rest[length:]
            a, b = (int(x) for x in rng.choice(placed, size=2, replace=False))
            path = [a] + ear + [b]
            edges.update(tuple(sorted(p)) for p in zip(path, path[1:]))
            placed += ear
        for u, v in itertools.combinations(range(n), 2):
            if rng.random() < 0.1:
                edges.add((u, v))
        g = DynamicGraph(n, sorted(edges))
        if is_two_edge_connected(g):
            return g


# ---------------------------------------------------- kernel-ordering oracle


def _expansions(ledger: ReductionLedger, limit: int = 256):
    """Per node: the blocks it expands to when undoing contractions.

    Each variant is ``(sequence, {event_index: flipped})``; path chains
    contribute both orientations.
    """
    anchored: dict[int, list[int]] = {}
    for i, e in enumerate(ledger.events):
        if e.anchor is not None:
            anchored.setdefault(e.anchor, []).append(i)
    cache: dict[int, list[tuple[list[int], dict[int, bool]]]] = {}

    def expand(v):
        if v in cache:
            return cache[v]
        variants = [([v], {})]
        for i in reversed(anchored.get(v, [])):
            e = ledger.events[i]
            parts = [expand(x) for x in e.order_hint]
            flips = (False, True) if e.kind is Rule.PATH_COMPRESSION else (False,)
            nxt = []
            for seq, choice in variants:
                for combo in itertools.product(*parts):
                    for flip in flips:
                        block = [u for s, _ in (combo[::-1] if flip else combo) for u in s]
                        at = seq.index(v) + (0 if flip else 1)
                        merged = dict(choice)
                        for _, c in combo:
                            merged.update(c)
                        if e.kind is Rule.PATH_COMPRESSION:
                            merged[i] = flip
                        nxt.append((seq[:at] + block + seq[at:], merged))
            variants = nxt[:limit]
        cache[v] = variants
        return variants

    return expand


def _fill_of(adj: list[int], seq: Sequence[int]) -> tuple[int, list[int]]:
    fill = 0
    for x in seq:
        fill += _deficiency(adj, x)
        adj = _eliminate(adj, x)
    return fill, adj


def best_kernel_ordering(g: DynamicGraph, ledger: ReductionLedger) -> tuple[int, list[int]]:
    """Kernel ordering minimizing the fill of its reconstruction on ``g``.

    Fill is always measured on the original graph. A subset DP over kernel
    nodes, with chain orientation left free, gives a lower bound and a
    candidate; if the candidate's reconstruction misses the bound, every
    kernel permutation is tried.
    """
    ids, adj0 = _to_bits(g)
    if len(ids) > MAX_ORACLE_NODES:
        raise OracleTooLarge(f"oracle limited to {MAX_ORACLE_NODES} nodes")
    idx = {v: i for i, v in enumerate(ids)}
    expand = _expansions(ledger)

    adj = adj0
    prefix_fill = 0
    for e in ledger.events:
        if e.kind not in PREFIX_KINDS:
            continue
        for v in e.order_hint:
            options = [
                _fill_of(adj, [idx[u] for u in seq]) for seq, _ in expand(v)
            ]
            f, adj = min(options, key=lambda t: t[0])
            prefix_fill += f

    kernel = list(ledger.kernel_alive)
    blocks = [[[idx[u] for u in seq] for seq, _ in expand(v)] for v in kernel]
    memo: dict[int, tuple[int, int]] = {}

    def solve(mask: int, adj: list[int]) -> int:
        if mask == (1 << len(kernel)) - 1:
            return 0
        hit = memo.get(mask)
        if hit is not None:
            return hit[0]
        best, arg = None, -1
        for j in range(len(kernel)):
            if mask >> j & 1:
                continue
            for seq in blocks[j]:
                f, nadj = _fill_of(adj, seq)
                if best is not None and f >= best:
                    continue
                val = f + solve(mask | 1 << j, nadj)
                if best is None or val < best:
                    best, arg = val, j
        memo[mask] = (best, arg)
        return best

    bound = prefix_fill + solve(0, adj)
    order, mask = [], 0
    while len(order) < len(kernel):
        j = memo[mask][1]
        order.append(kernel[j])
        mask |= 1 << j

    from .eliminate import fill_in

    best_fill = fill_in(g, reconstruct_ordering(ledger, order))
    if best_fill == bound:
        return best_fill, order
    best_order = order
    for perm in itertools.permutations(kernel):
        f = fill_in(g, reconstruct_ordering(ledger, list(perm)))
        if f < best_fill:
            best_fill, best_order = f, list(perm)
            if f == bound:
                break
    return best_fill, best_order
