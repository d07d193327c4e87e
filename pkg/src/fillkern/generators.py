"""Deterministic synthetic instances: meshes, road-like graphs, clique chains, k-trees."""
from __future__ import annotations

import itertools

import numpy as np

from .graph import DynamicGraph


def grid(rows: int, cols: int) -> DynamicGraph:
    if rows < 1 or cols < 1:
        raise ValueError("grid dimensions must be positive")
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    return DynamicGraph(rows * cols, edges)


def road(rows: int, cols: int, min_len: int = 1, max_len: int = 8, seed: int = 0) -> DynamicGraph:
    """Grid whose edges are subdivided into degree-2 chains of random length.

    Chain lengths count the inserted nodes and are drawn uniformly from
    ``[min_len, max_len]``.
    """
    if min_len < 0 or max_len < min_len:
        raise ValueError("need 0 <= min_len <= max_len")
    base = grid(rows, cols)
    rng = np.random.default_rng(seed)
    base_edges = list(base.edges())
    lengths = rng.integers(min_len, max_len + 1, size=len(base_edges))
    n = base.n_original
    edges = []
    for (u, v), k in zip(base_edges, lengths):
        chain = [u] + list(range(n, n + int(k))) + [v]
        n += int(k)
        edges.extend(zip(chain, chain[1:]))
    return DynamicGraph(n, edges)


def clique_chain(count: int, size: int) -> DynamicGraph:
    """``count`` cliques of ``size`` nodes, consecutive cliques joined by one edge."""
    if count < 1 or size < 1:
        raise ValueError("count and size must be positive")
    edges = []
    for c in range(count):
        base = c * size
        edges.extend(itertools.combinations(range(base, base + size), 2))
        if c:
            edges.append((base - 1, base))
    return DynamicGraph(count * size, edges)


def random_graph(n: int, p: float, seed: int = 0) -> DynamicGraph:
    if n < 0 or not 0.0 <= p <= 1.0:
        raise ValueError("need n >= 0 and 0 <= p <= 1")
    rng = np.random.default_rng(seed)
    pairs = list(itertools.combinations(range(n), 2))
    keep = rng.random(len(pairs)) < p
    return DynamicGraph(n, [e for e, k in zip(pairs, keep) if k])


def k_tree(n: int, k: int, seed: int = 0) -> DynamicGraph:
    """Random k-tree on ``n >= k + 1`` nodes with shuffled labels.

    Returns the graph; :func:`k_tree_with_order` also gives the construction order.
    """
    return k_tree_with_order(n, k, seed)[0]


def k_tree_with_order(n: int, k: int, seed: int = 0) -> tuple[DynamicGraph, list[int]]:
    if k < 1 or n < k + 1:
        raise ValueError("need k >= 1 and n >= k + 1")
    rng = np.random.default_rng(seed)
    label = [int(x) for x in rng.permutation(n)]
    cliques = [list(range(k + 1))]
    edges = list(itertools.combinations(range(k + 1), 2))
    for v in range(k + 1, n):
        host = cliques[int(rng.integers(len(cliques)))]
        drop = int(rng.integers(k + 1))
        base = [u for i, u in enumerate(host) if i != drop]
        edges.extend((u, v) for u in base)
        cliques.append(base + [v])
    g = DynamicGraph(n, [(label[u], label[v]) for u, v in edges])
    return g, [label[v] for v in range(n)]
