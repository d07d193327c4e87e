import numpy as np
from hypothesis import given, settings, strategies as st

from conftest import complete, cycle, path
from fillkern.eliminate import fill_in
from fillkern.generators import grid, k_tree, road
from fillkern.graph import DynamicGraph
from fillkern.oracle import random_connected_graph
from fillkern.order import (
    NDConfig,
    check_separator,
    find_separator,
    min_degree_order,
    nested_dissection,
    reduced_nested_dissection,
)
from fillkern.reduce import PipelineConfig


def test_min_degree_examples():
    order = min_degree_order(path(5))
    assert order[0] in (0, 4) and fill_in(path(5), order) == 0
    assert fill_in(cycle(4), min_degree_order(cycle(4))) == 1
    assert fill_in(complete(4), min_degree_order(complete(4))) == 0


def test_separator_path():
    res = find_separator(path(5))
    assert res.s == [2] and len(res.v1) == len(res.v2) == 2


def test_separator_cut_vertex():
    g = DynamicGraph(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)])
    assert find_separator(g).s == [2]


def test_separator_disconnected():
    g = DynamicGraph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    res = find_separator(g)
    assert res.s == [] and {tuple(res.v1), tuple(res.v2)} == {(0, 1, 2), (3, 4, 5)}


def test_nd_base_case_is_min_degree():
    g = grid(5, 5)
    assert nested_dissection(g, NDConfig(recursion_limit=100)) == min_degree_order(g)


def test_nd_path_separator_last():
    order = nested_dissection(path(9), NDConfig(recursion_limit=3))
    assert order[-1] == 4 and sorted(order) == list(range(9))


def test_nd_grid_quality():
    g = grid(8, 8)
    nd = fill_in(g, nested_dissection(g, NDConfig(recursion_limit=10)))
    md = fill_in(g, min_degree_order(g))
    assert nd <= 1.5 * md


def test_reduced_nd():
    order, stats = reduced_nested_dissection(k_tree(80, 3, seed=2), PipelineConfig.parse("S"))
    assert stats.fill_in == 0
    _, stats = reduced_nested_dissection(cycle(4), PipelineConfig.parse("SD"))
    assert stats.fill_in == 1


def test_nd_deterministic():
    g = road(10, 10, 1, 6, seed=4)
    cfg = NDConfig(recursion_limit=20, seed=7)
    assert nested_dissection(g, cfg) == nested_dissection(g, cfg)


@settings(max_examples=80, deadline=None)
@given(st.integers(2, 60), st.integers(0, 100_000), st.sampled_from([0.0, 0.2, 0.5]))
def test_separator_valid(n, seed, eps):
    g = random_connected_graph(n, np.random.default_rng(seed), p=3.0 / n)
    res = find_separator(g, NDConfig(epsilon=eps))
    check_separator(g, res, eps)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 80), st.integers(0, 100_000), st.integers(1, 30))
def test_nd_is_permutation(n, seed, limit):
    g = random_connected_graph(n, np.random.default_rng(seed), p=2.5 / max(n, 1))
    order = nested_dissection(g, NDConfig(recursion_limit=limit))
    assert sorted(order) == list(range(n))
