"""Fill-reducing orderings: data reduction, nested dissection on the kernel, reconstruction."""
from .eliminate import EliminationStats, deficiency, fill_in, is_chordal, lex_bfs, simulate, symbolic_factor
from .graph import DynamicGraph, GraphFormatError, load_metis, metis_string, read_permutation, write_metis, write_permutation
from .oracle import OracleResult, best_kernel_ordering, brute_force_phi
from .order import NDConfig, SeparatorResult, find_separator, min_degree_order, nested_dissection, reduced_nested_dissection
from .reduce import ConfigError, PipelineConfig, ReductionEvent, ReductionLedger, Rule, reconstruct_ordering, run_pipeline

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "DynamicGraph",
    "EliminationStats",
    "GraphFormatError",
    "NDConfig",
    "OracleResult",
    "PipelineConfig",
    "ReductionEvent",
    "ReductionLedger",
    "Rule",
    "SeparatorResult",
    "best_kernel_ordering",
    "brute_force_phi",
    "deficiency",
    "fill_in",
    "find_separator",
    "is_chordal",
    "lex_bfs",
    "load_metis",
    "metis_string",
    "min_degree_order",
    "nested_dissection",
    "read_permutation",
    "reconstruct_ordering",
    "reduced_nested_dissection",
    "run_pipeline",
    "simulate",
    "symbolic_factor",
    "write_metis",
    "write_permutation",
]
