"""Chain-based reachability index with constant-time queries.

Each vertex stores, for every chain, the lowest 1-based position on that
chain it can reach.  ``s`` reaches ``t`` iff ``idx[s, chain(t)] <= pos(t)``.
"""

from __future__ import annotations

import struct
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .decompose import ChainDecomposition
from .exceptions import InconsistentInput, ParseError, RangeError
from .graph import Dag, TopoOrder, sort_adjacency

__all__ = ["INF", "ReachIndex", "IndexStats", "build_index", "update_stats", "read_index"]

INF = 0xFFFFFFFF
MAGIC = b"DCRI"
VERSION = 1
_HEADER = struct.Struct("<4sIII")


@dataclass(frozen=True)
class IndexStats:
    """Counters from one index build.

    ``e_tr`` counts edges whose update was skipped because the source already
    reached that chain at or below the target; every skipped edge is
    transitive and every transitive edge is skipped.
    """

    n: int
    m: int
    k_c: int
    e_tr: int
    updates: int
    build_ms: float

    @property
    def e_red(self) -> int:
        return self.m - self.e_tr

    @property
    def tr_ratio(self) -> float:
        return self.e_tr / self.m if self.m else 0.0


class ReachIndex:
    """Dense ``(n, k_c)`` table of lowest reachable chain positions."""

    def __init__(self, chain_of: np.ndarray, pos_of: np.ndarray, idx: np.ndarray):
        self.chain_of = np.ascontiguousarray(chain_of, dtype=np.uint32)
        self.pos_of = np.ascontiguousarray(pos_of, dtype=np.uint32)
        self.idx = np.ascontiguousarray(idx, dtype=np.uint32)
        self.stats: IndexStats | None = None

    @property
    def n(self) -> int:
        return len(self.chain_of)

    @property
    def k_c(self) -> int:
        return self.idx.shape[1]

    def query(self, s: int, t: int) -> bool:
        n = self.n
        if not (0 <= s < n and 0 <= t < n):
            raise RangeError(f"query ({s}, {t}) outside 0..{n - 1}")
        return bool(self.idx[s, self.chain_of[t]] <= self.pos_of[t])

    def query_many(self, sources, targets) -> np.ndarray:
        s = np.asarray(sources, dtype=np.int64)
        t = np.asarray(targets, dtype=np.int64)
        n = self.n
        if s.size and (s.min() < 0 or s.max() >= n or t.min() < 0 or t.max() >= n):
            raise RangeError(f"query vertex outside 0..{n - 1}")
        return self.idx[s, self.chain_of[t]] <= self.pos_of[t]

    def matrix(self) -> np.ndarray:
        """All ``n**2`` answers as a boolean matrix."""
        return self.idx[:, self.chain_of] <= self.pos_of[np.newaxis, :]

    def to_bytes(self) -> bytes:
        head = _HEADER.pack(MAGIC, VERSION, self.n, self.k_c)
        pairs = np.stack([self.chain_of, self.pos_of], axis=1).astype("<u4")
        return head + pairs.tobytes() + self.idx.astype("<u4").tobytes()

    @classmethod
    def from_bytes(cls, data: bytes) -> "ReachIndex":
        if len(data) < _HEADER.size:
            raise ParseError("index file too short")
        magic, version, n, k = _HEADER.unpack_from(data)
        if magic != MAGIC:
            raise ParseError(f"bad magic {magic!r}")
        if version != VERSION:
            raise ParseError(f"unsupported index version {version}")
        expected = _HEADER.size + 8 * n + 4 * n * k
        if len(data) != expected:
            raise ParseError(f"index file has {len(data)} bytes, expected {expected}")
        off = _HEADER.size
        pairs = np.frombuffer(data, dtype="<u4", count=2 * n, offset=off).reshape(n, 2)
        idx = np.frombuffer(data, dtype="<u4", count=n * k, offset=off + 8 * n).reshape(n, k)
        return cls(pairs[:, 0], pairs[:, 1], idx)

    def save(self, path: str | Path) -> None:
        Path(path).write_bytes(self.to_bytes())

    def __eq__(self, other) -> bool:
        if not isinstance(other, ReachIndex):
            return NotImplemented
        return (np.array_equal(self.chain_of, other.chain_of) and np.array_equal(self.pos_of, other.pos_of)
                and np.array_equal(self.idx, other.idx))

    def __repr__(self) -> str:
        return f"ReachIndex(n={self.n}, k_c={self.k_c})"


def read_index(path: str | Path) -> ReachIndex:
    return ReachIndex.from_bytes(Path(path).read_bytes())


def build_index(g: Dag, t: TopoOrder, d: ChainDecomposition, stacks: list[list[int]] | None = None) -> ReachIndex:
    """Fill the index in reverse topological order.

    Successors are visited in ascending rank.  A successor ``w`` only
    triggers a ``k_c``-wide minimum update when ``pos(w)`` is below what the
    row already records for ``w``'s chain; otherwise ``(v, w)`` is transitive
    and skipped.  The vertex's own slot is left at infinity until all its
    successors are merged, so an edge to the next vertex of its own chain is
    judged by the successors only.
    """
    if d.n != g.n:
        raise InconsistentInput(f"decomposition covers {d.n} vertices, graph has {g.n}")
    d.check_consistency()
    if stacks is None:
        stacks = sort_adjacency(g, t)
    start = time.perf_counter()
    n, k = g.n, d.k
    chain_of, pos_of = d.chain_of, d.pos_of
    idx = np.full((n, k), INF, dtype=np.uint32)
    minimum = np.minimum
    skipped = updates = 0
    for v in reversed(t.order):
        row = idx[v]
        for w in reversed(stacks[v]):
            if pos_of[w] < row[chain_of[w]]:
                minimum(row, idx[w], out=row)
                updates += 1
            else:
                skipped += 1
        row[chain_of[v]] = pos_of[v]
    elapsed = (time.perf_counter() - start) * 1000.0
    ix = ReachIndex(np.array(chain_of), np.array(pos_of), idx)
    ix.stats = IndexStats(n, g.m, k, skipped, updates, elapsed)
    return ix


def update_stats(ix: ReachIndex) -> IndexStats:
    """Counters recorded by :func:`build_index` for ``ix``."""
    if ix.stats is None:
        raise ValueError("index was not built in this process; no stats recorded")
    return ix.stats
