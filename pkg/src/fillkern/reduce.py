"""Data reduction rules for minimum fill-in and their pipeline driver.

Four rules are exact (simplicial, indistinguishable, twin, path compression),
two are heuristic (degree-2 elimination, triangle contraction). Every applied
reduction is recorded as a :class:`ReductionEvent` so that an ordering of the
reduced graph can be mapped back with :func:`reconstruct_ordering`.
"""
from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

from .graph import DynamicGraph


class Rule(str, Enum):
    SIMPLICIAL = "S"
    INDISTINGUISHABLE = "I"
    TWIN = "T"
    PATH_COMPRESSION = "P"
    DEGREE2 = "D"
    TRIANGLE = "C"


EXACT_RULES = frozenset({Rule.SIMPLICIAL, Rule.INDISTINGUISHABLE, Rule.TWIN, Rule.PATH_COMPRESSION})
PREFIX_KINDS = frozenset({Rule.SIMPLICIAL, Rule.DEGREE2})


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ReductionEvent:
    kind: Rule
    removed: tuple[int, ...]
    anchor: int | None = None
    order_hint: tuple[int, ...] = ()
    # path compression only: (a0, a_{k+1}), the nodes outside the chain
    # adjacent to the anchor end and to the far end respectively
    endpoints: tuple[int, int] | None = None


@dataclass
class ReductionLedger:
    n_original: int
    events: list[ReductionEvent] = field(default_factory=list)
    kernel_alive: list[int] = field(default_factory=list)
    shadow: "Shadow | None" = field(default=None, repr=False, compare=False)

    def removed_count(self) -> int:
        return sum(len(e.removed) for e in self.events)

    def kernel_fraction(self) -> float:
        if self.n_original == 0:
            return 0.0
        return len(self.kernel_alive) / self.n_original

    def check(self) -> None:
        """Assert the events partition the removed nodes."""
        seen = set(self.kernel_alive)
        assert len(seen) == len(self.kernel_alive)
        for e in self.events:
            assert e.removed, "empty event"
            assert e.anchor is None or e.anchor not in e.removed
            assert sorted(e.order_hint) == sorted(e.removed)
            for v in e.removed:
                assert v not in seen, f"node {v} removed twice"
                seen.add(v)
        assert seen == set(range(self.n_original))


@dataclass(frozen=True)
class PipelineConfig:
    rules: tuple[Rule, ...] = ()
    delta: int = 0
    passes: int = 64
    single_pass: bool = False
    strict_triangle: bool = False

    def __post_init__(self):
        if self.delta < 0:
            raise ConfigError("degree limit must be non-negative")
        if self.passes < 1:
            raise ConfigError("passes must be at least 1")
        if Rule.PATH_COMPRESSION in self.rules and Rule.DEGREE2 in self.rules:
            raise ConfigError("path compression (P) and degree-2 elimination (D) are exclusive")

    @classmethod
    def parse(cls, text: str, **kwargs) -> "PipelineConfig":
        """Parse strings like ``"SD18"`` or ``"sid c 12"``; ``C``/``Δ`` is triangle contraction."""
        s = re.sub(r"\s+", "", text or "").upper().replace("Δ", "C").replace("∆", "C")
        m = re.fullmatch(r"([SITPDC]*)(\d*)", s)
        if not m:
            raise ConfigError(f"invalid pipeline string {text!r}")
        rules = tuple(Rule(ch) for ch in m.group(1))
        delta = int(m.group(2)) if m.group(2) else 0
        return cls(rules=rules, delta=delta, **kwargs)

    def normalized(self) -> str:
        return "".join(r.value for r in self.rules) + (str(self.delta) if self.delta else "")


# ------------------------------------------------------------------- shadow


class Shadow:
    """The uncontracted graph behind a kernel.

    Reductions act on the kernel, where a node may stand for a block of
    original nodes. Exact rules stay exact only if their condition also holds
    among the original nodes, so the pipeline keeps the input graph with just
    the eliminated nodes taken out, plus each kernel node's block listed in
    reconstruction order.
    """

    def __init__(self, g: DynamicGraph):
        self.h = g.copy()
        self.block: dict[int, list[int]] = {v: [v] for v in g.alive}

    def singleton(self, v: int) -> bool:
        return len(self.block[v]) == 1

    def drops_cleanly(self, v: int) -> bool:
        """True if the block of ``v`` can be eliminated with zero fill in turn."""
        gone: set[int] = set()
        for m in self.block[v]:
            nb = self.h.neighbor_set(m) - gone
            need = len(nb) - 1
            for y in nb:
                if len((self.h.neighbor_set(y) - gone) & nb) != need:
                    return False
            gone.add(m)
        return True

    def same_closed(self, u: int, v: int) -> bool:
        members = self.block[u] + self.block[v]
        ref = self.h.neighbor_set(members[0]) | {members[0]}
        return all((self.h.neighbor_set(m) | {m}) == ref for m in members[1:])

    def same_open(self, u: int, v: int) -> bool:
        members = self.block[u] + self.block[v]
        ref = self.h.neighbor_set(members[0])
        return all(self.h.neighbor_set(m) == ref for m in members[1:])

    def path_node(self, v: int) -> bool:
        return self.singleton(v) and self.h.degree(v) == 2

    def eliminate(self, v: int) -> None:
        for m in self.block.pop(v):
            self.h.eliminate_node(m)

    def merge(self, keep: int, drop: int) -> None:
        self.block[keep].extend(self.block.pop(drop))


def _shadow(g: DynamicGraph, ledger: ReductionLedger) -> Shadow:
    # standalone rule calls get a shadow scoped to this call, which is exact
    # as long as ``g`` itself has not been contracted
    sh = getattr(ledger, "shadow", None)
    return sh if sh is not None else Shadow(g)


# --------------------------------------------------------------------- rules


def _is_simplicial(g: DynamicGraph, v: int) -> bool:
    nb = g.neighbor_set(v)
    need = len(nb) - 1
    for y in nb:
        if len(nb & g.neighbor_set(y)) != need:
            return False
    return True


def reduce_simplicial(g: DynamicGraph, delta: int, ledger: ReductionLedger) -> int:
    """One pass over nodes by non-decreasing degree, removing simplicial ones."""
    sh = _shadow(g, ledger)
    removed = 0
    for v in sorted(g.alive, key=lambda u: (g.degree(u), u)):
        if not g.is_alive(v):
            continue
        if delta and g.degree(v) > delta:
            continue
        if not _is_simplicial(g, v):
            continue
        plain = sh.singleton(v) and all(sh.singleton(u) for u in g.neighbor_set(v))
        if not plain and not sh.drops_cleanly(v):
            continue
        sh.eliminate(v)
        g.remove_node(v)
        ledger.events.append(ReductionEvent(Rule.SIMPLICIAL, (v,), None, (v,)))
        removed += 1
    return removed


def _contract_groups(g, sh, groups, kind, ledger, same) -> int:
    # nodes whose neighborhood changed this pass wait for the next pass
    dirty: set[int] = set()
    removed = 0
    for group in groups:
        keep, rest = group[0], []
        if keep in dirty:
            continue
        for drop in group[1:]:
            if drop not in dirty and same(keep, drop):
                dirty.update(g.neighbor_set(drop))
                g.contract(keep, drop)
                sh.merge(keep, drop)
                rest.append(drop)
        if rest:
            ledger.events.append(ReductionEvent(kind, tuple(rest), keep, tuple(rest)))
            removed += len(rest)
    return removed


def _groups_from_pairs(pairs) -> list[list[int]]:
    parent: dict[int, int] = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in pairs:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[max(ru, rv)] = min(ru, rv)
    groups: dict[int, list[int]] = {}
    for x in parent:
        groups.setdefault(find(x), []).append(x)
    return [sorted(m) for _, m in sorted(groups.items()) if len(m) > 1]


def reduce_indistinguishable(g: DynamicGraph, ledger: ReductionLedger) -> int:
    """Contract adjacent nodes with equal closed neighborhoods."""
    sh = _shadow(g, ledger)
    h = {v: v + sum(g.neighbor_set(v)) for v in g.alive}

    def closed(v):
        return g.neighbor_set(v) | {v}

    def same(a, b):
        return closed(a) == closed(b) and sh.same_closed(a, b)

    pairs = [
        (u, v) for u, v in g.edges()
        if h[u] == h[v] and g.degree(u) == g.degree(v) and same(u, v)
    ]
    return _contract_groups(g, sh, _groups_from_pairs(pairs), Rule.INDISTINGUISHABLE, ledger, same)


def reduce_twin(g: DynamicGraph, ledger: ReductionLedger) -> int:
    """Contract non-adjacent nodes with equal open neighborhoods."""
    sh = _shadow(g, ledger)
    keyed = sorted((sum(g.neighbor_set(v)), g.degree(v), v) for v in g.alive)

    def same(a, b):
        return g.neighbor_set(a) == g.neighbor_set(b) and sh.same_open(a, b)

    groups = []
    i = 0
    while i < len(keyed):
        j = i
        while j < len(keyed) and keyed[j][:2] == keyed[i][:2]:
            j += 1
        # equal hash and degree: split the run by exact neighborhood
        reps: list[list[int]] = []
        for _, _, v in keyed[i:j]:
            for grp in reps:
                if same(grp[0], v):
                    grp.append(v)
                    break
            else:
                reps.append([v])
        groups.extend(sorted(grp) for grp in reps if len(grp) > 1)
        i = j
    groups.sort()
    return _contract_groups(g, sh, groups, Rule.TWIN, ledger, same)


def _chains(g: DynamicGraph):
    """Maximal paths of degree-2 nodes as (chain, a0, a_end).

    ``chain[0]`` is adjacent to ``a0`` and ``chain[-1]`` to ``a_end``. Whole
    cycles are cut open next to their smallest node, which then serves as
    ``a0`` with its cycle neighbor as ``a_end``.
    """
    seen = set()
    for v in g.alive:
        if v in seen or g.degree(v) != 2:
            continue
        sides = []
        cycle = False
        for start in g.neighbors(v):
            run, prev, cur = [], v, start
            while g.degree(cur) == 2 and cur != v:
                run.append(cur)
                nxt = [u for u in g.neighbor_set(cur) if u != prev]
                prev, cur = cur, nxt[0]
            if cur == v:
                cycle = True
                break
            sides.append((run, cur))
        if cycle:
            ring = [v]
            prev, cur = v, g.neighbors(v)[0]
            while cur != v:
                ring.append(cur)
                nxt = [u for u in g.neighbor_set(cur) if u != prev]
                prev, cur = cur, nxt[0]
            seen.update(ring)
            if len(ring) >= 4:
                yield ring[1:-1], ring[0], ring[-1]
            continue
        (left, a0), (right, a1) = sides
        chain = left[::-1] + [v] + right
        seen.update(chain)
        if chain[-1] < chain[0]:
            chain, a0, a1 = chain[::-1], a1, a0
        yield chain, a0, a1


def _clean_runs(sh: Shadow, chain, a0, a_end):
    """Sub-chains made of original degree-2 nodes framed by single nodes."""
    seq = [a0] + chain + [a_end]
    i = 1
    while i < len(seq) - 1:
        if not sh.path_node(seq[i]):
            i += 1
            continue
        j = i
        while j + 1 < len(seq) - 1 and sh.path_node(seq[j + 1]):
            j += 1
        lo, hi = i, j
        if not sh.singleton(seq[lo - 1]):
            lo += 1
        if not sh.singleton(seq[hi + 1]):
            hi -= 1
        if hi - lo >= 1:
            yield seq[lo:hi + 1], seq[lo - 1], seq[hi + 1]
        i = j + 1


def reduce_path_compression(g: DynamicGraph, ledger: ReductionLedger) -> int:
    """Replace each maximal degree-2 chain by its first node."""
    sh = _shadow(g, ledger)
    removed = 0
    # a run hanging off a single node (a0 == a_end) is left alone
    runs = [r for c in list(_chains(g)) for r in _clean_runs(sh, *c) if r[1] != r[2]]
    for chain, a0, a_end in runs:
        keep, rest = chain[0], chain[1:]
        for v in rest:
            g.remove_node(v)
            sh.merge(keep, v)
        g.add_edge(keep, a_end)
        ledger.events.append(
            ReductionEvent(Rule.PATH_COMPRESSION, tuple(rest), keep, tuple(rest), (a0, a_end))
        )
        removed += len(rest)
    return removed


def reduce_degree2(g: DynamicGraph, ledger: ReductionLedger) -> int:
    """Eliminate degree-2 nodes until none are left."""
    sh = getattr(ledger, "shadow", None)
    queue = deque(v for v in g.alive if g.degree(v) == 2)
    removed = 0
    while queue:
        v = queue.popleft()
        if not g.is_alive(v) or g.degree(v) != 2:
            continue
        nbrs = g.neighbors(v)
        g.eliminate_node(v)
        if sh is not None:
            sh.eliminate(v)
        ledger.events.append(ReductionEvent(Rule.DEGREE2, (v,), None, (v,)))
        removed += 1
        for u in nbrs:
            if g.degree(u) == 2:
                queue.append(u)
    return removed


def _triangle_group(g: DynamicGraph, x: int, strict: bool) -> list[int]:
    def shares(a, b):
        k = len(g.neighbor_set(a) & g.neighbor_set(b))
        return k == 1 if strict else k >= 1

    group = [x]
    partner = next(
        (y for y in g.neighbors(x) if g.degree(y) == 3 and shares(x, y)), None
    )
    if partner is None:
        return group
    group.append(partner)
    apex = min(g.neighbor_set(x) & g.neighbor_set(partner))
    cur = partner
    while True:
        nxt = next(
            (
                z for z in g.neighbors(cur)
                if z not in group and g.degree(z) == 3 and apex in g.neighbor_set(z)
            ),
            None,
        )
        if nxt is None:
            return group
        group.append(nxt)
        cur = nxt


def reduce_triangle_contraction(g: DynamicGraph, ledger: ReductionLedger, strict: bool = False) -> int:
    """Contract runs of adjacent degree-3 nodes sharing a common neighbor."""
    sh = getattr(ledger, "shadow", None)
    removed = 0
    for x in g.alive:
        if not g.is_alive(x) or g.degree(x) != 3:
            continue
        group = _triangle_group(g, x, strict)
        if len(group) < 2:
            continue
        for drop in group[1:]:
            g.contract(x, drop)
            if sh is not None:
                sh.merge(x, drop)
        rest = tuple(group[1:])
        ledger.events.append(ReductionEvent(Rule.TRIANGLE, rest, x, rest))
        removed += len(rest)
    return removed


# ------------------------------------------------------------------ pipeline


def apply_rule(g: DynamicGraph, rule: Rule, cfg: PipelineConfig, ledger: ReductionLedger) -> int:
    if rule is Rule.SIMPLICIAL:
        return reduce_simplicial(g, cfg.delta, ledger)
    if rule is Rule.INDISTINGUISHABLE:
        return reduce_indistinguishable(g, ledger)
    if rule is Rule.TWIN:
        return reduce_twin(g, ledger)
    if rule is Rule.PATH_COMPRESSION:
        return reduce_path_compression(g, ledger)
    if rule is Rule.DEGREE2:
        return reduce_degree2(g, ledger)
    if rule is Rule.TRIANGLE:
        return reduce_triangle_contraction(g, ledger, cfg.strict_triangle)
    raise ConfigError(f"unknown rule {rule!r}")


def run_pipeline(g: DynamicGraph, cfg: PipelineConfig) -> tuple[DynamicGraph, ReductionLedger]:
    """Apply ``cfg.rules`` in order, each to its fixpoint, sweeping until stable.

    The input graph is left untouched.
    """
    if g.num_alive() != g.n_original:
        raise ValueError("run_pipeline expects a graph with all nodes alive")
    kernel = g.copy()
    ledger = ReductionLedger(g.n_original)
    ledger.shadow = Shadow(g)
    try:
        for _ in range(cfg.passes):
            swept = 0
            for rule in cfg.rules:
                while True:
                    r = apply_rule(kernel, rule, cfg, ledger)
                    swept += r
                    if r == 0 or cfg.single_pass:
                        break
            if swept == 0 or cfg.single_pass:
                break
    finally:
        ledger.shadow = None
    ledger.kernel_alive = kernel.alive
    return kernel, ledger


def reconstruct_ordering(
    ledger: ReductionLedger,
    kernel_order: Sequence[int],
    orient: dict[int, bool] | None = None,
) -> list[int]:
    """Map an ordering of the kernel back to an ordering of the input graph.

    Events are undone last to first. ``orient`` forces the direction of
    path-compression chains by event index (True = start at the far end);
    by default a chain starts at the end whose outside neighbor comes first.
    """
    if sorted(kernel_order) != sorted(ledger.kernel_alive):
        raise ValueError("kernel ordering does not match the ledger's kernel")
    order = list(kernel_order)
    for idx in range(len(ledger.events) - 1, -1, -1):
        e = ledger.events[idx]
        if e.kind in PREFIX_KINDS:
            order[0:0] = e.order_hint
            continue
        at = order.index(e.anchor)
        if e.kind is Rule.PATH_COMPRESSION:
            a0, a_end = e.endpoints
            if orient is not None and idx in orient:
                flip = orient[idx]
            else:
                flip = a0 != a_end and order.index(a_end) < order.index(a0)
            if flip:
                order[at:at] = e.order_hint[::-1]
                continue
        order[at + 1:at + 1] = e.order_hint
    return order
