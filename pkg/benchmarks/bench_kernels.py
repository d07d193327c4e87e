"""Compare the numba and pure-Python paths of the hot kernels.

    python benchmarks/bench_kernels.py [--rows 60] [--reps 5]

Both paths are imported from the same module, so one process covers both;
FILLKERN_NO_JIT=1 only changes which one the library dispatches to.
"""
import argparse
import time

import numpy as np

from fillkern import _kernels
from fillkern.generators import road
from fillkern.order import min_degree_order


def timed(fn, reps):
    best = float("inf")
    for _ in range(reps):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--rows", type=int, default=60)
    ap.add_argument("--reps", type=int, default=5)
    args = ap.parse_args()
    if not _kernels.HAVE_JIT:
        raise SystemExit("numba unavailable (or FILLKERN_NO_JIT set); nothing to compare")

    g = road(args.rows, args.rows, 1, 8, seed=0)
    indptr, indices = g.to_csr()
    order = np.asarray(min_degree_order(g), dtype=np.int64)
    mask = np.ones(g.n_original, dtype=np.bool_)
    src = np.zeros(1, dtype=np.int64)
    print(f"road {args.rows}x{args.rows}: n={g.num_alive()} m={g.num_edges()}")

    # warm the JIT cache outside the timings
    _kernels.symbolic_colcounts_jit(indptr, indices, order)
    _kernels.bfs_distances_jit(indptr, indices, src, mask)

    cases = [
        ("symbolic_colcounts",
         lambda: _kernels.symbolic_colcounts_py(indptr, indices, order),
         lambda: _kernels.symbolic_colcounts_jit(indptr, indices, order)),
        ("bfs_distances",
         lambda: _kernels.bfs_distances_py(indptr, indices, src, mask),
         lambda: _kernels.bfs_distances_jit(indptr, indices, src, mask)),
    ]
    print(f"{'kernel':<20}{'python [s]':>12}{'numba [s]':>12}{'speedup':>10}")
    for name, py, jit in cases:
        t_py, out_py = timed(py, args.reps)
        t_jit, out_jit = timed(jit, args.reps)
        if not isinstance(out_py, tuple):
            out_py, out_jit = (out_py,), (out_jit,)
        same = all(np.array_equal(a, b) for a, b in zip(out_py, out_jit))
        flag = "" if same else "  MISMATCH"
        print(f"{name:<20}{t_py:>12.4f}{t_jit:>12.5f}{t_py / t_jit:>10.1f}{flag}")


if __name__ == "__main__":
    main()
