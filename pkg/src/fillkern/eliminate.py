"""Elimination simulation, chordality and symbolic factorization statistics."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _kernels
from .graph import DynamicGraph

Ordering = Sequence[int]


@dataclass
class EliminationStats:
    fill_in: int
    nnz_factor: int
    op_count: int
    per_step_deficiency: list[int] | None = field(default=None, repr=False)


def _check_order(g: DynamicGraph, order: Ordering, partial: bool = False) -> None:
    alive = set(g.alive)
    seen = set()
    for v in order:
        if v not in alive:
            raise ValueError(f"ordering entry {v} is not an alive node")
        if v in seen:
            raise ValueError(f"ordering entry {v} repeated")
        seen.add(v)
    if not partial and len(seen) != len(alive):
        raise ValueError(
            f"ordering covers {len(seen)} of {len(alive)} alive nodes"
        )


def deficiency(g: DynamicGraph, v: int) -> int:
    """Number of non-adjacent pairs in the neighborhood of ``v``."""
    nbrs = g.neighbors(v)
    missing = 0
    for i, a in enumerate(nbrs):
        adj_a = g.neighbor_set(a)
        for b in nbrs[i + 1:]:
            if b not in adj_a:
                missing += 1
    return missing


def simulate(g: DynamicGraph, order: Ordering, partial: bool = False) -> EliminationStats:
    """Eliminate nodes of a copy of ``g`` in ``order`` and count the fill.

    With ``partial=True`` the ordering may cover a subset of the alive nodes;
    statistics then describe only the performed steps, and ``nnz_factor``
    counts the columns of those steps.
    """
    _check_order(g, order, partial)
    work = g.copy()
    steps = []
    ops = 0
    nnz = 0
    for v in order:
        c = work.degree(v)
        ops += (c + 1) * (c + 2) // 2
        nnz += c + 1
        steps.append(work.eliminate_node(v))
    return EliminationStats(sum(steps), nnz, ops, steps)


def fill_edges(g: DynamicGraph, order: Ordering) -> set[tuple[int, int]]:
    """The triangulation generated by ``order``, as a set of (lo, hi) pairs."""
    _check_order(g, order)
    work = g.copy()
    added = set()
    for v in order:
        nbrs = work.neighbors(v)
        for i, a in enumerate(nbrs):
            for b in nbrs[i + 1:]:
                if not work.has_edge(a, b):
                    added.add((a, b))
        work.eliminate_node(v)
    return added


def symbolic_factor(g: DynamicGraph, order: Ordering, with_steps: bool = False) -> EliminationStats:
    """Factor statistics from the elimination tree, without building the factor.

    ``per_step_deficiency`` needs an explicit simulation and is only filled
    when ``with_steps`` is set.
    """
    _check_order(g, order)
    indptr, indices = g.to_csr()
    _, colcount = _kernels.symbolic_colcounts(indptr, indices, np.asarray(order, dtype=np.int64))
    n = len(order)
    offdiag = int(colcount.sum())
    ops = int(((colcount + 1) * (colcount + 2) // 2).sum())
    steps = simulate(g, order).per_step_deficiency if with_steps else None
    return EliminationStats(offdiag - g.num_edges(), n + offdiag, ops, steps)


def fill_in(g: DynamicGraph, order: Ordering) -> int:
    return symbolic_factor(g, order).fill_in


def is_perfect_elimination(g: DynamicGraph, order: Ordering) -> bool:
    return fill_in(g, order) == 0


def lex_bfs(g: DynamicGraph) -> list[int]:
    """Lexicographic BFS visit order; ties go to the lowest id."""
    # Partition refinement over an ordered list of cells; the first cell holds
    # the nodes with the lexicographically largest label.
    cells: list[list[int]] = [g.alive] if g.num_alive() else []
    visited = set()
    out = []
    while cells:
        head = cells[0]
        v = head.pop(0)
        if not head:
            cells.pop(0)
        visited.add(v)
        out.append(v)
        nb = g.neighbor_set(v)
        refined = []
        for cell in cells:
            inside = [u for u in cell if u in nb]
            outside = [u for u in cell if u not in nb]
            if inside:
                refined.append(inside)
            if outside:
                refined.append(outside)
        cells = refined
    return out


def is_chordal(g: DynamicGraph) -> bool:
    """Chordality via Lex-BFS; the reversed visit order is checked as a PEO."""
    peo = lex_bfs(g)[::-1]
    pos = {v: i for i, v in enumerate(peo)}
    for v in peo:
        later = [u for u in g.neighbor_set(v) if pos[u] > pos[v]]
        if not later:
            continue
        parent = min(later, key=pos.__getitem__)
        parent_nb = g.neighbor_set(parent)
        for u in later:
            if u != parent and u not in parent_nb:
                return False
    return True
