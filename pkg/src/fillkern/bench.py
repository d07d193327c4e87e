"""Run records, the compare harness, and the CSV schema shared with the CLI."""
from __future__ import annotations

import csv
import io
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Callable, Sequence

from .eliminate import symbolic_factor
from .graph import DynamicGraph, load_metis
from .order import NDConfig, nested_dissection
from .reduce import PipelineConfig, reconstruct_ordering, run_pipeline


@dataclass
class RunRecord:
    instance: str
    config: str
    n: int
    m: int
    kernel_fraction: float
    reduce_time: float
    order_time: float
    total_time: float
    fill_in: int
    nnz_factor: int
    op_count: int
    seed: int

    QUALITY = ("n", "m", "kernel_fraction", "fill_in", "nnz_factor", "op_count")

    def quality(self) -> tuple:
        return tuple(getattr(self, f) for f in self.QUALITY)


RECORD_FIELDS = [f.name for f in fields(RunRecord)]
COMPARE_FIELDS = RECORD_FIELDS + ["status", "speedup", "nnz_improvement", "time_profile", "nnz_profile"]
# columns that must not depend on the machine or on scheduling
QUALITY_FIELDS = ["instance", "config", "seed", *RunRecord.QUALITY, "status", "nnz_improvement", "nnz_profile"]

_INT_FIELDS = {"n", "m", "fill_in", "nnz_factor", "op_count", "seed"}


def run_once(
    g: DynamicGraph,
    pipeline: PipelineConfig,
    nd: NDConfig = NDConfig(),
    instance: str = "",
) -> tuple[RunRecord, list[int]]:
    """Reduce, order and reconstruct once; returns the record and the ordering."""
    t0 = time.perf_counter()
    kernel, ledger = run_pipeline(g, pipeline)
    t1 = time.perf_counter()
    kernel_order = nested_dissection(kernel, nd)
    t2 = time.perf_counter()
    order = reconstruct_ordering(ledger, kernel_order)
    t3 = time.perf_counter()
    stats = symbolic_factor(g, order)
    rec = RunRecord(
        instance=instance,
        config=pipeline.normalized(),
        n=g.num_alive(),
        m=g.num_edges(),
        kernel_fraction=ledger.kernel_fraction(),
        reduce_time=t1 - t0,
        order_time=t2 - t1,
        total_time=t3 - t0,
        fill_in=stats.fill_in,
        nnz_factor=stats.nnz_factor,
        op_count=stats.op_count,
        seed=nd.seed,
    )
    return rec, order


def run_repeated(
    g: DynamicGraph, pipeline: PipelineConfig, nd: NDConfig, reps: int, instance: str = ""
) -> RunRecord:
    """Average timings over ``reps`` runs; quality fields must agree exactly."""
    if reps < 1:
        raise ValueError("reps must be >= 1")
    recs = [run_once(g, pipeline, nd, instance)[0] for _ in range(reps)]
    first = recs[0]
    for r in recs[1:]:
        if r.quality() != first.quality():
            raise RuntimeError(f"non-deterministic result for {instance!r} / {first.config!r}")
    for name in ("reduce_time", "order_time", "total_time"):
        setattr(first, name, sum(getattr(r, name) for r in recs) / reps)
    return first


def thread_count() -> int:
    raw = os.environ.get("FILLKERN_THREADS", "").strip()
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            raise ValueError(f"FILLKERN_THREADS must be an integer, got {raw!r}") from None
    return os.cpu_count() or 1


def compare(
    instances: Sequence[str | Path],
    configs: Sequence[str],
    reps: int = 10,
    nd: NDConfig = NDConfig(),
    single_pass: bool = False,
    loader: Callable[[str], DynamicGraph] | None = None,
) -> list[dict]:
    """One row per (instance, config), with ratios against the empty pipeline.

    The empty config is added if missing. A failing instance yields rows with
    ``status`` set to the error and blank numbers.
    """
    if not instances:
        raise ValueError("no instances given")
    pipelines = [PipelineConfig.parse(c, single_pass=single_pass) for c in configs]
    names = []
    for p in [PipelineConfig.parse("", single_pass=single_pass), *pipelines]:
        if p.normalized() not in [q.normalized() for q in names]:
            names.append(p)
    load = loader or (lambda path: load_metis(Path(path)))

    graphs: dict[str, DynamicGraph | Exception] = {}
    labels = []
    for inst in instances:
        label = Path(str(inst)).stem if loader is None else str(inst)
        labels.append(label)
        try:
            graphs[label] = load(str(inst))
        except (OSError, ValueError) as exc:
            graphs[label] = exc

    cells = [(label, p) for label in labels for p in names]

    def run_cell(cell):
        label, p = cell
        g = graphs[label]
        if isinstance(g, Exception):
            return cell, None, f"error: {g}"
        try:
            return cell, run_repeated(g.copy(), p, nd, reps, label), "ok"
        except (ValueError, RuntimeError) as exc:
            return cell, None, f"error: {exc}"

    with ThreadPoolExecutor(max_workers=min(thread_count(), len(cells))) as pool:
        results = list(pool.map(run_cell, cells))

    rows = []
    by_label: dict[str, list[dict]] = {}
    for (label, p), rec, status in results:
        if rec is None:
            row = {k: "" for k in COMPARE_FIELDS}
            row.update(instance=label, config=p.normalized(), seed=nd.seed, status=status)
        else:
            row = {**asdict(rec), "status": status}
        rows.append(row)
        by_label.setdefault(label, []).append(row)

    for group in by_label.values():
        ok = [r for r in group if r["status"] == "ok"]
        base = next((r for r in ok if r["config"] == ""), None)
        t_best = min((r["total_time"] for r in ok), default=None)
        nnz_best = min((r["nnz_factor"] for r in ok), default=None)
        for r in ok:
            r["speedup"] = _ratio(base["total_time"], r["total_time"]) if base else ""
            r["nnz_improvement"] = _ratio(base["nnz_factor"], r["nnz_factor"]) if base else ""
            r["time_profile"] = _ratio(t_best, r["total_time"])
            r["nnz_profile"] = _ratio(nnz_best, r["nnz_factor"])
            if r is base:
                r["speedup"] = 1.0
    return rows


def _ratio(a: float, b: float) -> float:
    if b == 0:
        return 1.0 if a == 0 else float("inf")
    return a / b


# ----------------------------------------------------------------------- csv


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def records_to_csv(rows: Sequence[RunRecord | dict], columns: Sequence[str] | None = None) -> str:
    dicts = [asdict(r) if isinstance(r, RunRecord) else dict(r) for r in rows]
    if columns is None:
        columns = COMPARE_FIELDS if any("status" in d for d in dicts) else RECORD_FIELDS
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for d in dicts:
        w.writerow([_fmt(d.get(c, "")) for c in columns])
    return buf.getvalue()


def _parse_value(name: str, raw: str):
    if raw == "" and name not in ("instance", "config", "status"):
        return ""
    if name in _INT_FIELDS:
        return int(raw)
    if name in ("instance", "config", "status"):
        return raw
    return float(raw)


def parse_csv(text: str) -> list[dict]:
    """Inverse of :func:`records_to_csv`."""
    reader = csv.DictReader(io.StringIO(text))
    return [{k: _parse_value(k, v) for k, v in row.items()} for row in reader]


def record_from_row(row: dict) -> RunRecord:
    return RunRecord(**{k: row[k] for k in RECORD_FIELDS})


def quality_columns(text: str) -> str:
    """Project a compare CSV onto its deterministic columns."""
    rows = parse_csv(text)
    return records_to_csv(rows, QUALITY_FIELDS)
