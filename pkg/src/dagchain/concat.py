"""Turning path decompositions into chain decompositions by concatenation.

A reversed depth-first lookup starts at the head of a chain and walks
predecessor edges until it meets the tail of another chain; the two chains
are then joined.  Every vertex a lookup fully explores without success can
never lead to a tail again, so it is flagged dead and skipped by all later
lookups.  The total work is ``O(n + m + sum |P_i|)`` where ``P_i`` are the
connecting paths of successful lookups.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .decompose import ChainDecomposition, _lookahead_targets, _pick_tail
from .graph import Dag, TopoOrder, sorted_predecessors, topo_sort
from .oracles import longest_path

__all__ = ["ConcatStats", "LookupState", "reversed_dfs_lookup", "concatenate", "decompose_h3_conc"]


@dataclass
class ConcatStats:
    """Accounting for one concatenation run.

    ``sum_path_len`` counts edges on the connecting paths, so each term is
    bounded by the longest path length ``l`` (also in edges).  With
    ``record=True`` the ``trace`` lists ``(start, retired, path)`` per lookup,
    where ``retired`` holds the vertices that lookup newly flagged dead.
    """

    c: int = 0
    sum_path_len: int = 0
    deleted: int = 0
    l: int = 0
    k_p: int = 0
    k_c: int = 0
    lookups: int = 0
    trace: list | None = field(default=None, repr=False)


class LookupState:
    """Mutable flags shared by successive lookups over one graph."""

    def __init__(self, g: Dag, t: TopoOrder, is_tail: list[bool]):
        # predecessors in descending rank: most recent first
        self.preds = [p[::-1] for p in sorted_predecessors(g, t)]
        self.is_tail = is_tail
        self.dead = [False] * g.n
        self._mark = [0] * g.n
        self._stamp = 0


def reversed_dfs_lookup(g: Dag, start: int, state: LookupState) -> tuple[list[int], list[int]]:
    """Search backwards from ``start`` for the nearest live chain tail.

    Returns ``(R, P)``.  ``P`` is the connecting path listed forward from the
    tail to ``start`` (empty if no tail is reachable); ``R`` is every other
    visited vertex.  Dead vertices are never entered.
    """
    state._stamp += 1
    stamp = state._stamp
    mark, dead, is_tail, preds = state._mark, state.dead, state.is_tail, state.preds
    mark[start] = stamp
    visited = [start]
    stack = [start]
    cursor = [0]
    while stack:
        v = stack[-1]
        plist = preds[v]
        i = cursor[-1]
        nxt = -1
        while i < len(plist):
            u = plist[i]
            i += 1
            if dead[u] or mark[u] == stamp:
                continue
            nxt = u
            break
        cursor[-1] = i
        if nxt == -1:
            stack.pop()
            cursor.pop()
            continue
        mark[nxt] = stamp
        if is_tail[nxt]:
            path = [nxt]
            path.extend(reversed(stack))
            on_path = set(path)
            return [x for x in visited if x not in on_path], path
        visited.append(nxt)
        stack.append(nxt)
        cursor.append(0)
    return visited, []


def _retire(state: LookupState, vertices, stats: ConcatStats) -> list[int]:
    # returns the vertices that were not dead yet; only those count as deleted
    dead = state.dead
    fresh = [x for x in vertices if not dead[x]]
    for x in fresh:
        dead[x] = True
    stats.deleted += len(fresh)
    return fresh


def concatenate(g: Dag, d: ChainDecomposition, t: TopoOrder | None = None, *, record: bool = False):
    """Join chains of ``d`` whose tail reaches another chain's head.

    Chains are visited by ascending rank of their head.  Returns the merged
    decomposition (``"chain"`` mode, chains ordered by head rank) and a
    :class:`ConcatStats`.
    """
    if t is None:
        t = topo_sort(g)
    n = g.n
    rank = t.rank
    nxt = [-1] * n
    is_tail = [False] * n
    is_head = [False] * n
    for chain in d.chains:
        for a, b in zip(chain, chain[1:]):
            nxt[a] = b
        is_head[chain[0]] = True
        is_tail[chain[-1]] = True
    state = LookupState(g, t, is_tail)
    stats = ConcatStats(k_p=d.k, trace=[] if record else None)
    for f in sorted((c[0] for c in d.chains), key=rank.__getitem__):
        if not is_head[f]:
            continue
        rest, path = reversed_dfs_lookup(g, f, state)
        stats.lookups += 1
        if path:
            tail = path[0]
            nxt[tail] = f
            is_tail[tail] = False
            is_head[f] = False
            stats.c += 1
            stats.sum_path_len += len(path) - 1
        # a failed start stays searchable while it still ends a chain
        keep = f if is_tail[f] else -1
        retired = _retire(state, (x for x in rest if x != keep), stats)
        if record:
            stats.trace.append((f, tuple(retired), tuple(path)))
    chains = []
    for h in sorted((v for v in range(n) if is_head[v]), key=rank.__getitem__):
        chain = [h]
        while nxt[chain[-1]] != -1:
            chain.append(nxt[chain[-1]])
        chains.append(chain)
    out = ChainDecomposition.from_chains(chains, n, mode="chain")
    stats.k_c = out.k
    stats.l = longest_path(g, t)
    return out, stats


def decompose_h3_conc(g: Dag, t: TopoOrder, *, record: bool = False):
    """H3 with concatenation applied on the fly.

    Identical to :func:`~dagchain.decompose.decompose_h3` except that a
    vertex with no immediate predecessor ending a chain triggers a reversed
    lookup; if a tail is found the vertex is appended to that chain.
    ``stats.k_p`` counts the chains the run would have opened without lookups.
    """
    rank = t.rank
    n = g.n
    ahead = _lookahead_targets(g, t)
    assigned = [False] * n
    is_tail = [False] * n
    chain_id = [-1] * n
    chains: list[list[int]] = []
    state = LookupState(g, t, is_tail)
    stats = ConcatStats(trace=[] if record else None)
    for v in t.order:
        failed = False
        if not assigned[v]:
            u = _pick_tail(g, v, is_tail, rank)
            if u == -1:
                stats.k_p += 1
                rest, path = reversed_dfs_lookup(g, v, state)
                stats.lookups += 1
                if path:
                    u = path[0]
                    stats.c += 1
                    stats.sum_path_len += len(path) - 1
                retired = _retire(state, (x for x in rest if x != v), stats)
                failed = not path
                if record:
                    stats.trace.append((v, retired, tuple(path)))
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
        if failed and not is_tail[v]:
            state.dead[v] = True
            stats.deleted += 1
            if record:
                stats.trace[-1][1].append(v)
    if record:
        stats.trace = [(v, tuple(r), p) for v, r, p in stats.trace]
    out = ChainDecomposition.from_chains(chains, n, mode="chain")
    stats.k_c = out.k
    stats.l = longest_path(g, t)
    return out, stats
