import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import complete, cycle, path
from fillkern.eliminate import fill_in
from fillkern.generators import grid, k_tree, road
from fillkern.graph import DynamicGraph
from fillkern.oracle import brute_force_phi, random_connected_graph
from fillkern.reduce import (
    ConfigError,
    PipelineConfig,
    ReductionEvent,
    ReductionLedger,
    Rule,
    reconstruct_ordering,
    reduce_degree2,
    reduce_indistinguishable,
    reduce_path_compression,
    reduce_simplicial,
    reduce_triangle_contraction,
    reduce_twin,
    run_pipeline,
)


def apply(g, fn, *args):
    ledger = ReductionLedger(g.n_original)
    return fn(g, *args, ledger), ledger


# ------------------------------------------------------------------ config


def test_config_parse():
    cfg = PipelineConfig.parse("sid c 12")
    assert cfg.normalized() == "SIDC12"
    cfg = PipelineConfig.parse("SD18")
    assert cfg.rules == (Rule.SIMPLICIAL, Rule.DEGREE2) and cfg.delta == 18
    assert PipelineConfig.parse("SI∆").normalized() == "SIC"
    assert PipelineConfig.parse("").rules == ()


@pytest.mark.parametrize("bad", ["PD", "SPD", "SX", "12S"])
def test_config_rejects(bad):
    with pytest.raises(ConfigError):
        PipelineConfig.parse(bad)


def test_config_bounds():
    with pytest.raises(ConfigError):
        PipelineConfig(passes=0)
    with pytest.raises(ConfigError):
        PipelineConfig(delta=-1)


# ------------------------------------------------------------------- rules


def test_simplicial():
    g = complete(5)
    removed, _ = apply(g, reduce_simplicial, 0)
    assert removed == 5 and g.num_alive() == 0
    g = cycle(4)
    assert apply(g, reduce_simplicial, 0)[0] == 0


def test_simplicial_degree_limit():
    g = complete(5)
    assert apply(g, reduce_simplicial, 3)[0] == 0
    assert apply(path(4), reduce_simplicial, 1)[0] > 0


def test_tree_fixpoint_empties():
    g = DynamicGraph(7, [(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6)])
    kernel, ledger = run_pipeline(g, PipelineConfig.parse("S"))
    assert kernel.num_alive() == 0
    ledger.check()


def test_indistinguishable():
    # i1, i2 adjacent and sharing the rest of their neighborhood
    g = DynamicGraph(5, [(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 4), (3, 4)])
    removed, ledger = apply(g, reduce_indistinguishable)
    assert removed == 1 and ledger.events[0].kind is Rule.INDISTINGUISHABLE
    assert apply(cycle(5), reduce_indistinguishable)[0] == 0


def test_indistinguishable_k4_across_passes():
    kernel, _ = run_pipeline(complete(4), PipelineConfig.parse("I"))
    assert kernel.num_alive() == 1


def test_twin():
    g = cycle(4)
    removed, ledger = apply(g, reduce_twin)
    assert removed == 1 and g.num_alive() == 3 and g.num_edges() == 2
    assert ledger.events[0].anchor == 0 and ledger.events[0].removed == (2,)
    assert apply(complete(3), reduce_twin)[0] == 0


def test_twin_k23():
    g = DynamicGraph(5, [(a, b) for a in (0, 1) for b in (2, 3, 4)])
    kernel, _ = run_pipeline(g, PipelineConfig.parse("T"))
    assert len([v for v in kernel.alive if v >= 2]) == 1


def test_path_compression_cycle():
    g = cycle(10)
    removed, ledger = apply(g, reduce_path_compression)
    assert removed == 7 and g.num_alive() == 3 and g.num_edges() == 3
    assert ledger.events[0].kind is Rule.PATH_COMPRESSION


def test_path_compression_barbell():
    tri = [(0, 1), (1, 2), (0, 2)]
    chain = [(2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8)]
    g = DynamicGraph(11, tri + chain + [(8, 9), (9, 10), (8, 10)])
    removed, _ = apply(g, reduce_path_compression)
    assert removed == 4 and g.num_alive() == 7
    assert len([v for v in g.alive if 3 <= v <= 7]) == 1


def test_path_compression_grid_noop():
    assert apply(grid(4, 4), reduce_path_compression)[0] == 0


def test_degree2():
    g = cycle(5)
    removed, _ = apply(g, reduce_degree2)
    assert removed == 3 and g.num_alive() == 2 and g.num_edges() == 1
    g = grid(4, 4)
    apply(g, reduce_degree2)
    assert g.num_alive() == 12
    assert apply(complete(4), reduce_degree2)[0] == 0


def test_triangle_contraction():
    g = DynamicGraph(5, [(0, 1), (0, 2), (1, 2), (0, 3), (1, 4)])
    removed, ledger = apply(g, reduce_triangle_contraction)
    assert removed == 1 and ledger.events[0].kind is Rule.TRIANGLE
    assert apply(cycle(6), reduce_triangle_contraction)[0] == 0
    k4 = complete(4)
    assert apply(k4, reduce_triangle_contraction)[0] > 0
    k4.audit()


def test_triangle_strict_mode():
    # 0 and 1 are the only adjacent degree-3 pair and share both 2 and 3
    g = DynamicGraph(6, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 4), (2, 5), (3, 4), (3, 5)])
    strict = g.copy()
    assert reduce_triangle_contraction(strict, ReductionLedger(6), strict=True) == 0
    assert reduce_triangle_contraction(g, ReductionLedger(6)) == 1


# ---------------------------------------------------------------- pipeline


def test_pipeline_chordal_empty():
    kernel, ledger = run_pipeline(k_tree(50, 2, seed=3), PipelineConfig.parse("S"))
    assert kernel.num_alive() == 0 and ledger.kernel_fraction() == 0.0


def test_pipeline_c4_all_rules():
    for kw in ({}, {"passes": 1}, {"single_pass": True}):
        kernel, _ = run_pipeline(cycle(4), PipelineConfig.parse("SITDC", **kw))
        assert kernel.num_alive() == 2


def test_pipeline_road_sd():
    g = road(8, 8, 1, 8, seed=2)
    _, ledger = run_pipeline(g, PipelineConfig.parse("SD"))
    assert ledger.kernel_fraction() <= 0.30


def test_pipeline_leaves_input_untouched():
    g = cycle(6)
    run_pipeline(g, PipelineConfig.parse("SITP"))
    assert g.num_alive() == 6 and g.num_edges() == 6


# ---------------------------------------------------------- reconstruction


def test_reconstruct_identity():
    ledger = ReductionLedger(3, [], [0, 1, 2])
    assert reconstruct_ordering(ledger, [2, 0, 1]) == [2, 0, 1]


def test_reconstruct_twin_c4():
    ev = ReductionEvent(Rule.TWIN, (3,), anchor=1, order_hint=(3,))
    ledger = ReductionLedger(4, [ev], [0, 1, 2])
    order = reconstruct_ordering(ledger, [1, 0, 2])
    assert order == [1, 3, 0, 2]
    assert fill_in(cycle(4), order) == 1


def test_reconstruct_rejects_foreign_order():
    ledger = ReductionLedger(3, [], [0, 1, 2])
    with pytest.raises(ValueError):
        reconstruct_ordering(ledger, [0, 1])


def test_reconstruct_chordal():
    g = k_tree(30, 3, seed=9)
    kernel, ledger = run_pipeline(g, PipelineConfig.parse("S"))
    assert fill_in(g, reconstruct_ordering(ledger, kernel.alive)) == 0


configs = st.sampled_from(["S", "I", "T", "P", "D", "C", "SITP", "SD", "SITDC", "TIP", "PSIT", "SDC"])


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 16), st.integers(0, 100_000), configs)
def test_ledger_partition_and_valid_order(n, seed, cfg):
    g = random_connected_graph(n, np.random.default_rng(seed))
    kernel, ledger = run_pipeline(g, PipelineConfig.parse(cfg))
    kernel.audit()
    ledger.check()
    order = reconstruct_ordering(ledger, kernel.alive[::-1])
    assert sorted(order) == list(range(n))


@settings(max_examples=120, deadline=None)
@given(st.integers(1, 9), st.integers(0, 100_000), st.sampled_from(["D", "C", "SD", "SITDC"]))
def test_inexact_rules_never_beat_optimum(n, seed, cfg):
    g = random_connected_graph(n, np.random.default_rng(seed))
    kernel, ledger = run_pipeline(g, PipelineConfig.parse(cfg))
    assert fill_in(g, reconstruct_ordering(ledger, kernel.alive)) >= brute_force_phi(g).phi
