"""Immutable DAG representation, text I/O, topological order and SCC condensation."""

from __future__ import annotations

import heapq
import logging
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .exceptions import CycleError, ParseError, RangeError

logger = logging.getLogger(__name__)

__all__ = [
    "Dag",
    "TopoOrder",
    "SccCondensation",
    "load_dag",
    "read_dag",
    "dumps_dag",
    "write_dag",
    "topo_sort",
    "scc_condense",
    "sort_adjacency",
    "sorted_successors",
    "sorted_predecessors",
]


def _edge_array(edges) -> np.ndarray:
    arr = np.array(edges if isinstance(edges, np.ndarray) else list(edges), dtype=np.int64)
    if arr.size == 0:
        return np.empty((0, 2), dtype=np.int64)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError(f"edges must have shape (m, 2), got {arr.shape}")
    return arr


def _group(keys: np.ndarray, values: np.ndarray, n: int) -> tuple[tuple[int, ...], ...]:
    # stable sort keeps the original edge order inside each bucket
    order = np.argsort(keys, kind="stable")
    vals = values[order].tolist()
    bounds = np.searchsorted(keys[order], np.arange(n + 1)).tolist()
    return tuple(tuple(vals[bounds[i]:bounds[i + 1]]) for i in range(n))


class Dag:
    """Directed acyclic graph on vertices ``0..n-1`` stored as adjacency arrays.

    Both successor (``out_adj``) and predecessor (``in_adj``) lists are kept.
    Duplicate edges are dropped on construction and counted in
    ``duplicates_dropped``; self-loops and cycles raise :class:`CycleError`.
    """

    __slots__ = ("n", "m", "out_adj", "in_adj", "duplicates_dropped", "_edges")

    def __init__(self, n: int, edges: Iterable[Sequence[int]] | np.ndarray = (), *, validate: bool = True):
        n = int(n)
        if n < 0:
            raise ValueError("n must be non-negative")
        arr = _edge_array(edges)
        if len(arr):
            bad = (arr < 0) | (arr >= n)
            if bad.any():
                row = int(np.flatnonzero(bad.any(axis=1))[0])
                raise RangeError(f"edge ({arr[row, 0]}, {arr[row, 1]}) has an endpoint outside 0..{n - 1}")
            loops = np.flatnonzero(arr[:, 0] == arr[:, 1])
            if len(loops):
                v = int(arr[loops[0], 0])
                raise CycleError((v, v))
            codes = arr[:, 0] * n + arr[:, 1]
            _, first = np.unique(codes, return_index=True)
            dropped = len(arr) - len(first)
            if dropped:
                arr = arr[np.sort(first)]
        else:
            dropped = 0
        self.n = n
        self.m = len(arr)
        self.duplicates_dropped = dropped
        self._edges = arr
        arr.flags.writeable = False
        self.out_adj = _group(arr[:, 0], arr[:, 1], n)
        self.in_adj = _group(arr[:, 1], arr[:, 0], n)
        if dropped:
            logger.warning("dropped %d duplicate edge(s)", dropped)
        if validate:
            self._check_acyclic()

    def _check_acyclic(self) -> None:
        indeg = [len(p) for p in self.in_adj]
        queue = deque(v for v in range(self.n) if indeg[v] == 0)
        seen = 0
        while queue:
            u = queue.popleft()
            seen += 1
            for v in self.out_adj[u]:
                indeg[v] -= 1
                if indeg[v] == 0:
                    queue.append(v)
        if seen == self.n:
            return
        # every leftover vertex has a leftover predecessor, so walking backwards must repeat
        start = next(v for v in range(self.n) if indeg[v] > 0)
        walk, where = [start], {start: 0}
        while True:
            u = next(p for p in self.in_adj[walk[-1]] if indeg[p] > 0)
            if u in where:
                cycle = walk[where[u]:] + [u]
                cycle.reverse()
                raise CycleError(cycle)
            where[u] = len(walk)
            walk.append(u)

    @classmethod
    def from_adjacency(cls, out_adj: Sequence[Iterable[int]], **kwargs) -> "Dag":
        return cls(len(out_adj), [(u, v) for u, succ in enumerate(out_adj) for v in succ], **kwargs)

    def edges(self) -> list[tuple[int, int]]:
        """All edges ``(u, v)`` grouped by source, in adjacency order."""
        return [(u, v) for u, succ in enumerate(self.out_adj) for v in succ]

    def edge_array(self) -> np.ndarray:
        """``(m, 2)`` int64 array of edges in construction order."""
        return self._edges.copy()

    def out_degree(self, v: int) -> int:
        return len(self.out_adj[v])

    def in_degree(self, v: int) -> int:
        return len(self.in_adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.out_adj[u]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Dag):
            return NotImplemented
        return self.n == other.n and self.out_adj == other.out_adj

    def __hash__(self):
        return hash((self.n, self.out_adj))

    def __repr__(self) -> str:
        return f"Dag(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class TopoOrder:
    """A topological order and its inverse permutation."""

    order: tuple[int, ...]
    rank: tuple[int, ...]

    @classmethod
    def from_order(cls, order: Sequence[int]) -> "TopoOrder":
        rank = [0] * len(order)
        for i, v in enumerate(order):
            rank[v] = i
        return cls(tuple(order), tuple(rank))

    def is_valid_for(self, g: Dag) -> bool:
        if sorted(self.order) != list(range(g.n)):
            return False
        if any(self.order[self.rank[v]] != v for v in range(g.n)):
            return False
        rank = self.rank
        return all(rank[u] < rank[v] for u, succ in enumerate(g.out_adj) for v in succ)

    def __len__(self) -> int:
        return len(self.order)


def topo_sort(g: Dag) -> TopoOrder:
    """Kahn's algorithm; among available vertices the smallest id goes first."""
    indeg = [len(p) for p in g.in_adj]
    heap = [v for v in range(g.n) if indeg[v] == 0]
    heapq.heapify(heap)
    order = []
    out_adj = g.out_adj
    while heap:
        u = heapq.heappop(heap)
        order.append(u)
        for v in out_adj[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                heapq.heappush(heap, v)
    if len(order) != g.n:  # only reachable for Dag(validate=False)
        g._check_acyclic()
    return TopoOrder.from_order(order)


def sort_adjacency(g: Dag, t: TopoOrder) -> list[list[int]]:
    """Per-vertex successor stacks whose pops come out in ascending rank.

    Vertices are visited in reverse topological order and pushed onto the
    stack of every immediate predecessor, so the last push (the top of each
    stack) is always the lowest-ranked successor.  Linear time, no comparisons.
    """
    stacks: list[list[int]] = [[] for _ in range(g.n)]
    in_adj = g.in_adj
    for v in reversed(t.order):
        for s in in_adj[v]:
            stacks[s].append(v)
    return stacks


def _rank_sorted(g: Dag, t: TopoOrder, forward: bool) -> list[list[int]]:
    n = g.n
    src, dst = (g._edges[:, 0], g._edges[:, 1]) if forward else (g._edges[:, 1], g._edges[:, 0])
    rank = np.asarray(t.rank, dtype=np.int64)
    order = np.lexsort((rank[dst], src))
    vals = dst[order].tolist()
    bounds = np.searchsorted(src[order], np.arange(n + 1)).tolist()
    return [vals[bounds[i]:bounds[i + 1]] for i in range(n)]


def sorted_successors(g: Dag, t: TopoOrder) -> list[list[int]]:
    """Successor lists in ascending rank."""
    return _rank_sorted(g, t, forward=True)


def sorted_predecessors(g: Dag, t: TopoOrder) -> list[list[int]]:
    """Predecessor lists in ascending rank."""
    return _rank_sorted(g, t, forward=False)


@dataclass(frozen=True)
class SccCondensation:
    component_of: tuple[int, ...]
    condensed: Dag
    component_members: tuple[tuple[int, ...], ...]

    @property
    def n_components(self) -> int:
        return len(self.component_members)


def scc_condense(n: int, edges: Iterable[Sequence[int]]) -> SccCondensation:
    """Collapse strongly connected components of an arbitrary digraph.

    Iterative Tarjan.  Component ids follow a topological order of the
    condensation (every condensed edge goes from a lower to a higher id).
    """
    arr = _edge_array(edges)
    if len(arr) and ((arr < 0) | (arr >= n)).any():
        raise RangeError(f"edge endpoint outside 0..{n - 1}")
    adj = _group(arr[:, 0], arr[:, 1], n)

    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comp = [-1] * n
    emitted = 0
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, i = work[-1]
            succ = adj[v]
            if i < len(succ):
                work[-1] = (v, i + 1)
                w = succ[i]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w] and index[w] < low[v]:
                    low[v] = index[w]
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                if low[v] < low[parent]:
                    low[parent] = low[v]
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = emitted
                    if w == v:
                        break
                emitted += 1
    # Tarjan emits sinks first; flip so ids run in topological order
    component_of = tuple(emitted - 1 - c for c in comp)
    members: list[list[int]] = [[] for _ in range(emitted)]
    for v in range(n):
        members[component_of[v]].append(v)
    cross = [(component_of[u], component_of[v]) for u, v in arr.tolist() if component_of[u] != component_of[v]]
    condensed = Dag(emitted, cross)
    return SccCondensation(component_of, condensed, tuple(tuple(m) for m in members))


def load_dag(text: str) -> Dag:
    """Parse the edge-list text format.

    Line 1 is ``<n> <m>``, followed by exactly ``m`` lines ``<u> <v>``.
    Lines starting with ``#`` and blank lines are ignored.
    """
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"expected two integers, got {raw!r}", lineno)
        try:
            rows.append((int(parts[0]), int(parts[1]), lineno))
        except ValueError:
            raise ParseError(f"expected two integers, got {raw!r}", lineno) from None
    if not rows:
        raise ParseError("missing '<n> <m>' header")
    n, m, header_line = rows[0]
    if n < 0 or m < 0:
        raise ParseError("n and m must be non-negative", header_line)
    body = rows[1:]
    if len(body) != m:
        raise ParseError(f"header declares {m} edges but {len(body)} edge lines follow")
    for u, v, lineno in body:
        if not (0 <= u < n and 0 <= v < n):
            raise RangeError(f"line {lineno}: edge ({u}, {v}) has an endpoint outside 0..{n - 1}")
    return Dag(n, [(u, v) for u, v, _ in body])


def read_dag(path: str | Path) -> Dag:
    return load_dag(Path(path).read_text())


def dumps_dag(g: Dag) -> str:
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def write_dag(g: Dag, path: str | Path) -> None:
    Path(path).write_text(dumps_dag(g))
