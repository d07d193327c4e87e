import itertools

import numpy as np
from hypothesis import given, settings, strategies as st

from conftest import complete, cycle, path, star
from fillkern.eliminate import (
    deficiency,
    fill_edges,
    fill_in,
    is_chordal,
    is_perfect_elimination,
    simulate,
    symbolic_factor,
)
from fillkern.generators import k_tree_with_order
from fillkern.graph import DynamicGraph
from fillkern.oracle import random_connected_graph


def test_c4_every_ordering_fills_one():
    g = cycle(4)
    assert {fill_in(g, list(p)) for p in itertools.permutations(range(4))} == {1}


def test_tree_leaf_order_no_fill():
    g = DynamicGraph(7, [(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6)])
    assert fill_in(g, [3, 4, 5, 6, 1, 2, 0]) == 0


def test_c5_best_is_two():
    g = cycle(5)
    assert min(fill_in(g, list(p)) for p in itertools.permutations(range(5))) == 2


def test_deficiency():
    assert deficiency(cycle(4), 0) == 1
    assert deficiency(complete(4), 3) == 0
    assert deficiency(star(4), 0) == 6


def test_perfect_elimination():
    assert all(is_perfect_elimination(complete(3), list(p)) for p in itertools.permutations(range(3)))
    assert not any(is_perfect_elimination(cycle(4), list(p)) for p in itertools.permutations(range(4)))
    g, built = k_tree_with_order(40, 3, seed=5)
    assert is_perfect_elimination(g, built[::-1])


def test_is_chordal():
    assert is_chordal(path(6))
    assert not is_chordal(cycle(4))
    g = cycle(4)
    g.add_edge(0, 2)
    assert is_chordal(g)
    assert is_chordal(k_tree_with_order(60, 2, seed=1)[0])


def test_symbolic_factor_examples():
    assert symbolic_factor(path(3), [0, 1, 2]).nnz_factor == 5
    st4 = symbolic_factor(cycle(4), [0, 1, 2, 3])
    assert (st4.fill_in, st4.nnz_factor, st4.op_count) == (1, 9, 16)
    assert symbolic_factor(complete(3), [0, 1, 2]).op_count == 10


def test_with_steps():
    st_ = symbolic_factor(cycle(5), [0, 1, 2, 3, 4], with_steps=True)
    assert sum(st_.per_step_deficiency) == st_.fill_in == 2


def test_partial_simulation():
    st_ = simulate(cycle(4), [0], partial=True)
    assert st_.fill_in == 1 and st_.nnz_factor == 3


def test_bad_orderings_rejected():
    g = cycle(4)
    for bad in ([0, 1, 2], [0, 0, 1, 2], [0, 1, 2, 9]):
        try:
            simulate(g, bad)
        except ValueError:
            continue
        raise AssertionError(f"{bad} accepted")


def test_fill_edges_matches_count():
    g = cycle(6)
    order = [0, 2, 4, 1, 3, 5]
    assert len(fill_edges(g, order)) == fill_in(g, order)


@settings(max_examples=150, deadline=None)
@given(st.integers(2, 14), st.integers(0, 10_000))
def test_symbolic_matches_explicit(n, seed):
    rng = np.random.default_rng(seed)
    g = random_connected_graph(n, rng)
    order = [int(v) for v in rng.permutation(n)]
    a, b = simulate(g, order), symbolic_factor(g, order)
    assert (a.fill_in, a.nnz_factor, a.op_count) == (b.fill_in, b.nnz_factor, b.op_count)
    h = g.copy()
    for u, v in fill_edges(g, order):
        h.add_edge(u, v)
    assert is_chordal(h)
    assert is_perfect_elimination(h, order)


@settings(max_examples=100, deadline=None)
@given(st.integers(3, 30), st.integers(1, 3), st.integers(0, 999))
def test_chordal_agrees_with_zero_fill_order(n, k, seed):
    if n < k + 1:
        return
    g, built = k_tree_with_order(n, k, seed)
    assert is_chordal(g)
    assert fill_in(g, built[::-1]) == 0
