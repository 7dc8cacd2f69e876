"""Linear-time path decompositions: chain-order, node-order and the H3 variant.

All heuristics scan vertices in ascending topological rank and break every
tie by the smallest rank, so results are deterministic for a given order.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .exceptions import InconsistentInput, InvalidDecomposition, ParseError
from .graph import Dag, TopoOrder, sorted_successors

__all__ = [
    "ChainDecomposition",
    "decompose_co",
    "decompose_no",
    "decompose_h3",
    "dumps_chains",
    "loads_chains",
    "read_chains",
]

MODES = ("path", "chain")


@dataclass(frozen=True)
class ChainDecomposition:
    """Vertex-disjoint chains covering every vertex.

    ``chain_of[v]`` is the 0-based chain id of ``v`` and ``pos_of[v]`` its
    1-based position inside that chain.  In ``"path"`` mode consecutive chain
    members are joined by an edge; in ``"chain"`` mode only by a directed path.
    """

    chains: tuple[tuple[int, ...], ...]
    chain_of: tuple[int, ...]
    pos_of: tuple[int, ...]
    mode: str = "chain"

    @classmethod
    def from_chains(cls, chains: Iterable[Sequence[int]], n: int | None = None, mode: str = "chain"):
        if mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        chains = tuple(tuple(int(v) for v in c) for c in chains)
        if any(not c for c in chains):
            raise InvalidDecomposition("empty chain")
        total = sum(len(c) for c in chains)
        if n is None:
            n = total
        chain_of = [-1] * n
        pos_of = [0] * n
        for cid, chain in enumerate(chains):
            for pos, v in enumerate(chain, start=1):
                if not 0 <= v < n:
                    raise InvalidDecomposition(f"vertex {v} outside 0..{n - 1}")
                if chain_of[v] != -1:
                    raise InvalidDecomposition(f"vertex {v} appears in more than one chain position")
                chain_of[v] = cid
                pos_of[v] = pos
        if total != n:
            missing = [v for v in range(n) if chain_of[v] == -1]
            raise InvalidDecomposition(f"chains do not cover vertices {missing[:10]}")
        return cls(chains, tuple(chain_of), tuple(pos_of), mode)

    @property
    def k(self) -> int:
        return len(self.chains)

    @property
    def n(self) -> int:
        return len(self.chain_of)

    def check_consistency(self) -> None:
        """Raise :class:`InconsistentInput` if ``chain_of``/``pos_of`` disagree with ``chains``."""
        if len(self.pos_of) != len(self.chain_of):
            raise InconsistentInput("chain_of and pos_of differ in length")
        if sum(len(c) for c in self.chains) != len(self.chain_of):
            raise InconsistentInput("chains do not match the vertex count")
        for cid, chain in enumerate(self.chains):
            for pos, v in enumerate(chain, start=1):
                if not 0 <= v < len(self.chain_of) or self.chain_of[v] != cid or self.pos_of[v] != pos:
                    raise InconsistentInput(f"vertex {v}: arrays say (chain {self.chain_of[v] if 0 <= v < len(self.chain_of) else '?'}, "
                                            f"pos {self.pos_of[v] if 0 <= v < len(self.pos_of) else '?'}), chains say ({cid}, {pos})")

    def validate(self, g: Dag, t: TopoOrder) -> None:
        """Check cover, disjointness, rank monotonicity and (path mode) edge adjacency.

        Reachability between consecutive members of a ``"chain"`` is not
        checked here; it needs an oracle.
        """
        if self.n != g.n:
            raise InvalidDecomposition(f"decomposition covers {self.n} vertices, graph has {g.n}")
        try:
            self.check_consistency()
        except InconsistentInput as exc:
            raise InvalidDecomposition(str(exc)) from exc
        rank = t.rank
        for chain in self.chains:
            for a, b in zip(chain, chain[1:]):
                if rank[a] >= rank[b]:
                    raise InvalidDecomposition(f"chain step {a} -> {b} goes against the topological order")
                if self.mode == "path" and not g.has_edge(a, b):
                    raise InvalidDecomposition(f"path step {a} -> {b} is not an edge")

    def labels(self) -> list[int]:
        return list(self.chain_of)


def decompose_co(g: Dag, t: TopoOrder) -> ChainDecomposition:
    """Chain-order heuristic: grow one path at a time as far as it goes."""
    succ = sorted_successors(g, t)
    used = [False] * g.n
    chains = []
    for v in t.order:
        if used[v]:
            continue
        used[v] = True
        path = [v]
        cur = v
        while True:
            nxt = next((s for s in succ[cur] if not used[s]), None)
            if nxt is None:
                break
            used[nxt] = True
            path.append(nxt)
            cur = nxt
        chains.append(path)
    return ChainDecomposition.from_chains(chains, g.n, mode="path")


def decompose_no(g: Dag, t: TopoOrder) -> ChainDecomposition:
    """Node-order heuristic: append each vertex to a path ending at a predecessor.

    Among predecessors that currently end a path, the one with the smallest
    rank wins.
    """
    rank = t.rank
    is_tail = [False] * g.n
    chain_id = [-1] * g.n
    chains: list[list[int]] = []
    for v in t.order:
        best = -1
        for u in g.in_adj[v]:
            if is_tail[u] and (best == -1 or rank[u] < rank[best]):
                best = u
        if best == -1:
            chain_id[v] = len(chains)
            chains.append([v])
        else:
            is_tail[best] = False
            chain_id[v] = chain_id[best]
            chains[chain_id[v]].append(v)
        is_tail[v] = True
    return ChainDecomposition.from_chains(chains, g.n, mode="path")


def _pick_tail(g: Dag, v: int, is_tail: list[bool], rank: Sequence[int]) -> int:
    # lowest static out-degree, then smallest rank
    best = -1
    best_key = None
    out_adj = g.out_adj
    for u in g.in_adj[v]:
        if is_tail[u]:
            key = (len(out_adj[u]), rank[u])
            if best_key is None or key < best_key:
                best, best_key = u, key
    return best


def _lookahead_targets(g: Dag, t: TopoOrder) -> list[int]:
    """Per vertex, its lowest-ranked successor of in-degree 1 (or -1).

    Such a successor can only ever be placed through this one predecessor.
    """
    src, dst = g._edges[:, 0], g._edges[:, 1]
    indeg = np.bincount(dst, minlength=g.n)
    keep = indeg[dst] == 1
    src, dst = src[keep], dst[keep]
    rank = np.asarray(t.rank, dtype=np.int64)
    order = np.lexsort((rank[dst], src))
    heads, first = np.unique(src[order], return_index=True)
    out = np.full(g.n, -1, dtype=np.int64)
    out[heads] = dst[order][first]
    return out.tolist()


def decompose_h3(g: Dag, t: TopoOrder) -> ChainDecomposition:
    """Node-order variant with a low out-degree tail choice and in-degree-1 look-ahead.

    An unassigned vertex joins the path whose tail is an immediate
    predecessor of lowest out-degree.  After placing ``v``, an unassigned
    successor whose only predecessor is ``v`` is appended right away.
    """
    rank = t.rank
    ahead = _lookahead_targets(g, t)
    n = g.n
    assigned = [False] * n
    is_tail = [False] * n
    chain_id = [-1] * n
    chains: list[list[int]] = []
    for v in t.order:
        if not assigned[v]:
            u = _pick_tail(g, v, is_tail, rank)
            if u == -1:
                chain_id[v] = len(chains)
                chains.append([v])
            else:
                is_tail[u] = False
                chain_id[v] = chain_id[u]
                chains[chain_id[v]].append(v)
            assigned[v] = True
            is_tail[v] = True
        s = ahead[v]
        if s != -1 and not assigned[s]:
            is_tail[v] = False
            chain_id[s] = chain_id[v]
            chains[chain_id[v]].append(s)
            assigned[s] = True
            is_tail[s] = True
    return ChainDecomposition.from_chains(chains, g.n, mode="path")


def dumps_chains(d: ChainDecomposition, stats=None) -> str:
    """Render the chain file: ``k <count> mode <mode>`` then one chain per line."""
    lines = [f"k {d.k} mode {d.mode}"]
    if stats is not None:
        lines.append(f"# c={stats.c} sum_path_len={stats.sum_path_len} l={stats.l}")
    lines.extend(" ".join(map(str, c)) for c in d.chains)
    return "\n".join(lines) + "\n"


def loads_chains(text: str, n: int | None = None) -> ChainDecomposition:
    header = None
    chains = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if header is None:
            parts = line.split()
            if len(parts) != 4 or parts[0] != "k" or parts[2] != "mode" or parts[3] not in MODES:
                raise ParseError(f"bad chain-file header {raw!r}", lineno)
            try:
                header = (int(parts[1]), parts[3])
            except ValueError:
                raise ParseError(f"bad chain count in {raw!r}", lineno) from None
            continue
        try:
            chains.append([int(x) for x in line.split()])
        except ValueError:
            raise ParseError(f"non-integer vertex in {raw!r}", lineno) from None
    if header is None:
        raise ParseError("missing 'k <count> mode <path|chain>' header")
    if len(chains) != header[0]:
        raise ParseError(f"header declares {header[0]} chains but {len(chains)} follow")
    return ChainDecomposition.from_chains(chains, n, mode=header[1])


def read_chains(path: str | Path, n: int | None = None) -> ChainDecomposition:
    return loads_chains(Path(path).read_text(), n)
