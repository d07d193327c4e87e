"""Numeric inner loops, compiled with numba when available.

Set ``FILLKERN_NO_JIT=1`` to force the pure Python/numpy path (useful for
debugging and for the kernel benchmark).
"""
from __future__ import annotations

import os

import numpy as np

_DISABLE = os.environ.get("FILLKERN_NO_JIT", "").strip().lower() in {"1", "true", "yes"}

try:
    if _DISABLE:
        raise ImportError
    from numba import njit
    HAVE_JIT = True
except ImportError:
    HAVE_JIT = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


def _symbolic_colcounts(indptr, indices, order):
    # Row-subtree traversal over the elimination tree, one row at a time.
    # Returns (parent, colcount) in elimination-position numbering.
    n = order.shape[0]
    pos = np.full(indptr.shape[0] - 1, -1, dtype=np.int64)
    for k in range(n):
        pos[order[k]] = k
    parent = np.full(n, -1, dtype=np.int64)
    flag = np.full(n, -1, dtype=np.int64)
    colcount = np.zeros(n, dtype=np.int64)
    for k in range(n):
        v = order[k]
        flag[k] = k
        for p in range(indptr[v], indptr[v + 1]):
            j = pos[indices[p]]
            if j < 0 or j >= k:
                continue
            i = j
            while flag[i] != k:
                if parent[i] == -1:
                    parent[i] = k
                colcount[i] += 1
                flag[i] = k
                i = parent[i]
    return parent, colcount


symbolic_colcounts_py = _symbolic_colcounts
symbolic_colcounts_jit = njit(cache=True)(_symbolic_colcounts) if HAVE_JIT else None


def symbolic_colcounts(indptr: np.ndarray, indices: np.ndarray, order: np.ndarray):
    """Elimination tree and per-column off-diagonal counts of the Cholesky factor.

    ``order[k]`` is the node eliminated at step ``k``; nodes missing from
    ``order`` are ignored. Both outputs are indexed by elimination step.
    """
    indptr = np.ascontiguousarray(indptr, dtype=np.int64)
    indices = np.ascontiguousarray(indices, dtype=np.int64)
    order = np.ascontiguousarray(order, dtype=np.int64)
    fn = symbolic_colcounts_jit if HAVE_JIT else symbolic_colcounts_py
    return fn(indptr, indices, order)


def _bfs_distances(indptr, indices, sources, mask):
    n = indptr.shape[0] - 1
    dist = np.full(n, -1, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    head = 0
    tail = 0
    for s in sources:
        if mask[s] and dist[s] < 0:
            dist[s] = 0
            queue[tail] = s
            tail += 1
    while head < tail:
        u = queue[head]
        head += 1
        for p in range(indptr[u], indptr[u + 1]):
            w = indices[p]
            if mask[w] and dist[w] < 0:
                dist[w] = dist[u] + 1
                queue[tail] = w
                tail += 1
    return dist


bfs_distances_py = _bfs_distances
bfs_distances_jit = njit(cache=True)(_bfs_distances) if HAVE_JIT else None


def bfs_distances(indptr, indices, sources, mask) -> np.ndarray:
    """Multi-source BFS hop distances restricted to ``mask``; -1 if unreached."""
    fn = bfs_distances_jit if HAVE_JIT else bfs_distances_py
    return fn(
        np.ascontiguousarray(indptr, dtype=np.int64),
        np.ascontiguousarray(indices, dtype=np.int64),
        np.ascontiguousarray(sources, dtype=np.int64),
        np.ascontiguousarray(mask, dtype=np.bool_),
    )
