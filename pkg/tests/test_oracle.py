import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import complete, cycle, path
from fillkern.eliminate import fill_in
from fillkern.generators import grid
from fillkern.graph import DynamicGraph
from fillkern.oracle import (
    MAX_ORACLE_NODES,
    OracleTooLarge,
    best_kernel_ordering,
    brute_force_phi,
    enumerate_small_graphs,
    is_two_edge_connected,
    phi_after,
    phi_by_enumeration,
    random_connected_graph,
    random_two_edge_connected_graph,
)
from fillkern.reduce import PipelineConfig, reconstruct_ordering, run_pipeline


def test_known_values():
    assert brute_force_phi(cycle(4)).phi == 1
    assert brute_force_phi(cycle(5)).phi == 2
    assert brute_force_phi(cycle(7)).phi == 4
    assert brute_force_phi(complete(5)).phi == 0
    assert brute_force_phi(path(6)).phi == 0
    assert brute_force_phi(grid(3, 3)).phi == 5


def test_witness_attains_phi():
    g = grid(3, 4)
    res = brute_force_phi(g)
    assert sorted(res.witness) == list(range(12))
    assert fill_in(g, res.witness) == res.phi


def test_too_large():
    with pytest.raises(OracleTooLarge):
        brute_force_phi(cycle(MAX_ORACLE_NODES + 1))


def test_catalog_counts():
    # connected labeled graphs on n nodes
    assert [sum(1 for _ in enumerate_small_graphs(n)) for n in range(1, 6)] == [1, 1, 4, 38, 728]


def test_phi_after_monotone_c5():
    g = cycle(5)
    assert all(phi_after(g, x) == 1 for x in range(5))


def test_two_edge_connected_generator():
    rng = np.random.default_rng(0)
    for _ in range(20):
        g = random_two_edge_connected_graph(int(rng.integers(3, 10)), rng)
        assert is_two_edge_connected(g)
    assert not is_two_edge_connected(path(4))


def test_best_kernel_ordering_twin_trap():
    # K2,3: after twin merges the kernel alone would suggest zero fill
    g = DynamicGraph(5, [(a, b) for a in (0, 1) for b in (2, 3, 4)])
    kernel, ledger = run_pipeline(g, PipelineConfig.parse("SITP"))
    f, order = best_kernel_ordering(g, ledger)
    assert f == brute_force_phi(g).phi == 1
    assert fill_in(g, reconstruct_ordering(ledger, order)) == f


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 7), st.integers(0, 100_000))
def test_dp_matches_enumeration(n, seed):
    g = random_connected_graph(n, np.random.default_rng(seed))
    assert brute_force_phi(g).phi == phi_by_enumeration(g)


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 9), st.integers(0, 100_000))
def test_monotone_random(n, seed):
    g = random_connected_graph(n, np.random.default_rng(seed))
    phi = brute_force_phi(g).phi
    assert all(phi_after(g, x) <= phi for x in g.alive)
