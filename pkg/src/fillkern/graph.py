"""Mutable simple undirected graph and Metis/permutation file I/O."""
from __future__ import annotations

import io
import os
from contextlib import contextmanager
from typing import IO, Iterable, Iterator, Sequence

import numpy as np


_EMPTY: frozenset[int] = frozenset()


class GraphFormatError(ValueError):
    """Raised when a Metis graph or permutation file is malformed."""


class DynamicGraph:
    """Simple undirected graph over the fixed id range ``0..n_original-1``.

    Nodes can be removed, eliminated (neighborhood completed to a clique) or
    contracted into another node. Ids are never reused.
    """

    __slots__ = ("n_original", "_adj", "_alive")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise ValueError("node count must be non-negative")
        self.n_original = n
        self._adj: list[set[int]] = [set() for _ in range(n)]
        self._alive = np.ones(n, dtype=bool)
        for u, v in edges:
            self.add_edge(u, v)

    # ------------------------------------------------------------------ views

    @property
    def alive(self) -> list[int]:
        """Alive node ids, ascending."""
        return np.flatnonzero(self._alive).tolist()

    def is_alive(self, v: int) -> bool:
        return 0 <= v < self.n_original and bool(self._alive[v])

    def num_alive(self) -> int:
        return int(self._alive.sum())

    def num_edges(self) -> int:
        return sum(len(self._adj[v]) for v in self.alive) // 2

    def degree(self, v: int) -> int:
        self._check_alive(v)
        return len(self._adj[v])

    def neighbors(self, v: int) -> list[int]:
        """Sorted neighbor list of ``v``."""
        self._check_alive(v)
        return sorted(self._adj[v])

    def neighbor_set(self, v: int) -> set[int]:
        """The live neighbor set. Do not mutate."""
        return self._adj[v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    def edges(self) -> Iterator[tuple[int, int]]:
        for u in self.alive:
            for v in sorted(self._adj[u]):
                if u < v:
                    yield u, v

    def copy(self) -> "DynamicGraph":
        g = DynamicGraph.__new__(DynamicGraph)
        g.n_original = self.n_original
        g._alive = self._alive.copy()
        # dead slots share one immutable empty set; only alive nodes gain edges
        g._adj = [_EMPTY] * self.n_original
        for v in np.flatnonzero(g._alive).tolist():
            g._adj[v] = set(self._adj[v])
        return g

    def induced(self, nodes: Iterable[int]) -> "DynamicGraph":
        """Induced subgraph on ``nodes``, keeping the original id space."""
        keep = np.zeros(self.n_original, dtype=bool)
        keep[list(nodes)] = True
        g = DynamicGraph.__new__(DynamicGraph)
        g.n_original = self.n_original
        g._alive = keep & self._alive
        g._adj = [_EMPTY] * self.n_original
        for v in np.flatnonzero(g._alive).tolist():
            g._adj[v] = {u for u in self._adj[v] if keep[u]}
        return g

    def __repr__(self) -> str:
        return f"DynamicGraph(alive={self.num_alive()}, edges={self.num_edges()})"

    # -------------------------------------------------------------- mutation

    def add_edge(self, u: int, v: int) -> bool:
        """Insert edge u-v; returns False if it already existed."""
        self._check_alive(u)
        self._check_alive(v)
        if u == v:
            raise ValueError(f"self-loop at node {u}")
        if v in self._adj[u]:
            return False
        self._adj[u].add(v)
        self._adj[v].add(u)
        return True

    def remove_node(self, v: int) -> None:
        self._check_alive(v)
        for u in self._adj[v]:
            self._adj[u].discard(v)
        self._adj[v] = set()
        self._alive[v] = False

    def eliminate_node(self, v: int) -> int:
        """Remove ``v`` and complete its neighborhood; returns edges inserted."""
        self._check_alive(v)
        nbrs = sorted(self._adj[v])
        self.remove_node(v)
        added = 0
        for i, a in enumerate(nbrs):
            adj_a = self._adj[a]
            for b in nbrs[i + 1:]:
                if b not in adj_a:
                    adj_a.add(b)
                    self._adj[b].add(a)
                    added += 1
        return added

    def contract(self, keep: int, drop: int) -> None:
        """Merge ``drop`` into ``keep``; ``keep`` inherits the union neighborhood."""
        self._check_alive(keep)
        self._check_alive(drop)
        if keep == drop:
            raise ValueError("cannot contract a node into itself")
        merged = (self._adj[keep] | self._adj[drop]) - {keep, drop}
        self.remove_node(drop)
        for u in merged - self._adj[keep]:
            self._adj[keep].add(u)
            self._adj[u].add(keep)

    # ----------------------------------------------------------------- audit

    def audit(self) -> None:
        """Assert symmetry, simplicity and alive-only adjacency."""
        for v in range(self.n_original):
            nb = self._adj[v]
            if not self._alive[v]:
                assert not nb, f"dead node {v} has neighbors"
                continue
            assert v not in nb, f"self-loop at {v}"
            for u in nb:
                assert self._alive[u], f"{v} adjacent to dead node {u}"
                assert v in self._adj[u], f"asymmetric edge {v}-{u}"

    def _check_alive(self, v: int) -> None:
        if not self.is_alive(v):
            raise KeyError(f"node {v} is not alive")

    # ---------------------------------------------------------- conversions

    def to_csr(self) -> tuple[np.ndarray, np.ndarray]:
        """CSR arrays (indptr, indices) over the full id range, sorted rows."""
        indptr = np.zeros(self.n_original + 1, dtype=np.int64)
        for v in range(self.n_original):
            indptr[v + 1] = indptr[v] + len(self._adj[v])
        indices = np.empty(indptr[-1], dtype=np.int64)
        for v in range(self.n_original):
            if self._adj[v]:
                indices[indptr[v]:indptr[v + 1]] = sorted(self._adj[v])
        return indptr, indices


def _lines(source: str | bytes | os.PathLike | IO) -> Iterator[str]:
    """Lines of a file; ``str``/``bytes`` are contents, path-like objects are opened."""
    if isinstance(source, os.PathLike):
        with open(source, encoding="utf-8") as fh:
            yield from _lines(fh)
        return
    if isinstance(source, bytes):
        source = source.decode()
    if isinstance(source, str):
        source = io.StringIO(source)
    for raw in source:
        if isinstance(raw, bytes):
            raw = raw.decode()
        yield raw.rstrip("\r\n")


def load_metis(source: str | bytes | os.PathLike | IO) -> DynamicGraph:
    """Parse a Metis/Chaco graph. Vertex sizes and weights are read and dropped."""
    lines = (ln for ln in _lines(source) if not ln.lstrip().startswith("%"))
    try:
        header = next(lines).split()
    except StopIteration:
        raise GraphFormatError("empty input") from None
    if len(header) < 2:
        raise GraphFormatError(f"malformed header: {' '.join(header)!r}")
    try:
        n, m = int(header[0]), int(header[1])
        fmt = header[2] if len(header) > 2 else "0"
        ncon = int(header[3]) if len(header) > 3 else 0
    except ValueError:
        raise GraphFormatError(f"malformed header: {' '.join(header)!r}") from None
    if n < 0 or m < 0 or not set(fmt) <= {"0", "1"} or len(fmt) > 3:
        raise GraphFormatError(f"malformed header: {' '.join(header)!r}")
    fmt = fmt.zfill(3)
    has_size, has_vwgt, has_ewgt = fmt[0] == "1", fmt[1] == "1", fmt[2] == "1"
    if has_vwgt and ncon == 0:
        ncon = 1
    skip_head = int(has_size) + (ncon if has_vwgt else 0)
    step = 2 if has_ewgt else 1

    adj: list[list[int]] = []
    for v, line in zip(range(n), lines):
        try:
            tokens = [int(t) for t in line.split()]
        except ValueError:
            raise GraphFormatError(f"non-integer token on line for node {v + 1}") from None
        tokens = tokens[skip_head:]
        nbrs = tokens[::step]
        for u in nbrs:
            if not 1 <= u <= n:
                raise GraphFormatError(f"neighbor id {u} of node {v + 1} out of range")
            if u == v + 1:
                raise GraphFormatError(f"self-loop at node {v + 1}")
        if len(set(nbrs)) != len(nbrs):
            raise GraphFormatError(f"duplicate edge at node {v + 1}")
        adj.append([u - 1 for u in nbrs])
    if len(adj) < n:
        raise GraphFormatError(f"expected {n} adjacency lines, got {len(adj)}")

    g = DynamicGraph(n)
    sets = [set(a) for a in adj]
    for v, nb in enumerate(adj):
        for u in nb:
            if v not in sets[u]:
                raise GraphFormatError(
                    f"asymmetric adjacency: {v + 1}-{u + 1} listed only at node {v + 1}"
                )
            if v < u:
                g.add_edge(v, u)
    if g.num_edges() != m:
        raise GraphFormatError(f"header declares {m} edges, found {g.num_edges()}")
    return g


@contextmanager
def _sink(target: os.PathLike | IO[str]):
    if isinstance(target, os.PathLike):
        with open(target, "w", encoding="utf-8") as fh:
            yield fh
    else:
        yield target


def write_metis(g: DynamicGraph, target: os.PathLike | IO[str]) -> None:
    """Write alive nodes relabelled densely in id order (1-indexed)."""
    with _sink(target) as sink:
        _write_metis(g, sink)


def _write_metis(g: DynamicGraph, sink: IO[str]) -> None:
    ids = g.alive
    rank = {v: i + 1 for i, v in enumerate(ids)}
    sink.write(f"{len(ids)} {g.num_edges()}\n")
    for v in ids:
        sink.write(" ".join(str(rank[u]) for u in g.neighbors(v)) + "\n")


def metis_string(g: DynamicGraph) -> str:
    buf = io.StringIO()
    write_metis(g, buf)
    return buf.getvalue()


def write_permutation(order: Sequence[int], target: os.PathLike | IO[str]) -> None:
    """One 1-indexed node id per line, in elimination order."""
    check_permutation(order, len(order))
    with _sink(target) as sink:
        sink.write("".join(f"{v + 1}\n" for v in order))


def read_permutation(source: str | bytes | os.PathLike | IO) -> list[int]:
    order = []
    for ln in _lines(source):
        ln = ln.strip()
        if not ln or ln.startswith("%"):
            continue
        try:
            order.append(int(ln) - 1)
        except ValueError:
            raise GraphFormatError(f"bad permutation entry {ln!r}") from None
    return order


def check_permutation(order: Sequence[int], n: int) -> None:
    """Raise ValueError unless ``order`` is a permutation of ``0..n-1``."""
    if len(order) != n:
        raise ValueError(f"not a permutation: length {len(order)}, expected {n}")
    seen = np.zeros(n, dtype=bool)
    for v in order:
        if not 0 <= v < n:
            raise ValueError(f"not a permutation: id {v + 1} out of range")
        if seen[v]:
            raise ValueError(f"not a permutation: id {v + 1} repeated")
        seen[v] = True
