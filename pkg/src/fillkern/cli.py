"""``fillkern`` command line: order, compare, gen, verify."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import generators
from .bench import compare, records_to_csv, run_once
from .eliminate import simulate
from .graph import GraphFormatError, check_permutation, load_metis, read_permutation, write_metis, write_permutation
from .order import NDConfig
from .reduce import ConfigError, PipelineConfig

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_PARSE = 4
EXIT_CONFIG = 5
EXIT_INVALID = 6


class _Fail(Exception):
    def __init__(self, code: int, msg: str):
        super().__init__(msg)
        self.code = code


def _nd(args) -> NDConfig:
    try:
        return NDConfig(recursion_limit=args.recursion_limit, epsilon=args.epsilon, seed=args.seed)
    except ValueError as exc:
        raise _Fail(EXIT_CONFIG, str(exc)) from None


def _pipeline(text: str, single_pass: bool) -> PipelineConfig:
    try:
        return PipelineConfig.parse(text, single_pass=single_pass)
    except ConfigError as exc:
        raise _Fail(EXIT_CONFIG, f"config error: {exc}") from None


def _load(path: str):
    try:
        return load_metis(Path(path))
    except OSError as exc:
        raise _Fail(EXIT_IO, f"cannot read {path}: {exc.strerror or exc}") from None
    except GraphFormatError as exc:
        raise _Fail(EXIT_PARSE, f"{path}: {exc}") from None


def _write(path: str, text: str) -> None:
    try:
        if path == "-":
            sys.stdout.write(text)
        else:
            Path(path).write_text(text)
    except OSError as exc:
        raise _Fail(EXIT_IO, f"cannot write {path}: {exc.strerror or exc}") from None


def cmd_order(args) -> int:
    pipeline = _pipeline(args.config, args.single_pass)
    nd = _nd(args)
    g = _load(args.graph)
    rec, order = run_once(g, pipeline, nd, instance=Path(args.graph).stem)
    if args.perm:
        try:
            write_permutation(order, Path(args.perm))
        except OSError as exc:
            raise _Fail(EXIT_IO, f"cannot write {args.perm}: {exc.strerror or exc}") from None
    _write(args.stats, records_to_csv([rec]))
    return EXIT_OK


def cmd_compare(args) -> int:
    if not args.instances:
        raise _Fail(EXIT_USAGE, "no instances given")
    configs = args.configs.split(",") if args.configs is not None else [""]
    for c in configs:
        _pipeline(c, args.single_pass)
    nd = _nd(args)
    if args.reps < 1:
        raise _Fail(EXIT_CONFIG, "--reps must be >= 1")
    try:
        rows = compare(args.instances, configs, reps=args.reps, nd=nd, single_pass=args.single_pass)
    except ValueError as exc:
        raise _Fail(EXIT_CONFIG, str(exc)) from None
    _write(args.out, records_to_csv(rows))
    failed = [r for r in rows if r["status"] != "ok"]
    for r in failed:
        print(f"{r['instance']} [{r['config']}]: {r['status']}", file=sys.stderr)
    return EXIT_FAILED if len(failed) == len(rows) else EXIT_OK


def cmd_gen(args) -> int:
    p = args.params
    try:
        if args.kind == "grid":
            _arity(p, 2, "grid ROWS COLS")
            g = generators.grid(int(p[0]), int(p[1]))
        elif args.kind == "road":
            if len(p) not in (2, 3, 4):
                raise ValueError("usage: road ROWS COLS [MIN_LEN [MAX_LEN]]")
            lo = int(p[2]) if len(p) > 2 else 1
            hi = int(p[3]) if len(p) > 3 else (lo if len(p) > 2 else 8)
            g = generators.road(int(p[0]), int(p[1]), lo, hi, seed=args.seed)
        elif args.kind == "clique-chain":
            _arity(p, 2, "clique-chain COUNT SIZE")
            g = generators.clique_chain(int(p[0]), int(p[1]))
        else:
            _arity(p, 2, "random N P")
            g = generators.random_graph(int(p[0]), float(p[1]), seed=args.seed)
    except ValueError as exc:
        raise _Fail(EXIT_CONFIG, f"invalid parameters: {exc}") from None
    try:
        if args.out == "-":
            write_metis(g, sys.stdout)
        else:
            write_metis(g, Path(args.out))
    except OSError as exc:
        raise _Fail(EXIT_IO, f"cannot write {args.out}: {exc.strerror or exc}") from None
    return EXIT_OK


def _arity(params, k, usage):
    if len(params) != k:
        raise ValueError(f"usage: {usage}")


def cmd_verify(args) -> int:
    g = _load(args.graph)
    try:
        order = read_permutation(Path(args.perm))
    except OSError as exc:
        raise _Fail(EXIT_IO, f"cannot read {args.perm}: {exc.strerror or exc}") from None
    except GraphFormatError as exc:
        raise _Fail(EXIT_PARSE, f"{args.perm}: {exc}") from None
    try:
        check_permutation(order, g.n_original)
    except ValueError as exc:
        raise _Fail(EXIT_INVALID, str(exc)) from None
    st = simulate(g, order)
    print(f"fill_in={st.fill_in} nnz_factor={st.nnz_factor} op_count={st.op_count}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fillkern", description="Fill-reducing orderings with data reduction.")
    sub = ap.add_subparsers(dest="command", required=True)

    def nd_flags(p):
        p.add_argument("--seed", type=int, default=1)
        p.add_argument("--recursion-limit", type=int, default=120)
        p.add_argument("--epsilon", type=float, default=0.2)
        p.add_argument("--single-pass", action="store_true", help="one sweep per rule instead of a fixpoint")

    p = sub.add_parser("order", help="order one graph and write a permutation and a stats row")
    p.add_argument("graph")
    p.add_argument("--config", default="", help='reduction rules, e.g. "SD" or "SITP18"')
    p.add_argument("--perm", help="permutation output file")
    p.add_argument("--stats", default="-", help="CSV output file (default stdout)")
    nd_flags(p)
    p.set_defaults(func=cmd_order)

    p = sub.add_parser("compare", help="benchmark configs over instances")
    p.add_argument("instances", nargs="*")
    p.add_argument("--config", dest="configs", help="comma-separated configs; the empty config is always added")
    p.add_argument("--reps", type=int, default=10)
    p.add_argument("--out", default="-")
    nd_flags(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("gen", help="write a synthetic Metis graph")
    p.add_argument("kind", choices=["grid", "road", "clique-chain", "random"])
    p.add_argument("params", nargs="*")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("verify", help="check a permutation and print its elimination stats")
    p.add_argument("graph")
    p.add_argument("perm")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _Fail as exc:
        print(f"fillkern: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
