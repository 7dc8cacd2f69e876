"""Linear-time removal of transitive edges using a chain decomposition.

Out-pass: of all edges from ``u`` into one chain, only the edge to the
lowest position can be non-transitive.  In-pass: of all edges into ``v``
from one chain, only the edge from the highest position can be
non-transitive.  An edge is kept only if both passes keep it.
"""

from __future__ import annotations

from dataclasses import dataclass

from .decompose import ChainDecomposition
from .graph import Dag, TopoOrder, topo_sort
from .oracles import transitive_reduction, ReachMatrix, tc_dfs

__all__ = ["PruneResult", "EredReport", "prune_transitive", "check_ered_bound"]

OUT, IN, BOTH = "out", "in", "both"


@dataclass(frozen=True)
class PruneResult:
    kept: list[tuple[int, int]]
    removed: list[tuple[int, int]]
    reasons: dict[tuple[int, int], str]

    def pruned_graph(self, n: int) -> Dag:
        return Dag(n, self.kept, validate=False)


def prune_transitive(g: Dag, d: ChainDecomposition, t: TopoOrder | None = None) -> PruneResult:
    if t is None:
        t = topo_sort(g)
    d.validate(g, t)
    chain_of, pos_of = d.chain_of, d.pos_of
    k = d.k
    # per-chain scratch slots, invalidated by stamping instead of clearing
    stamp = [-1] * k
    best = [0] * k

    drop_out = set()
    for u, succ in enumerate(g.out_adj):
        for v in succ:
            c = chain_of[v]
            if stamp[c] != u or pos_of[v] < pos_of[best[c]]:
                stamp[c] = u
                best[c] = v
        for v in succ:
            if best[chain_of[v]] != v:
                drop_out.add((u, v))

    stamp = [-1] * k
    drop_in = set()
    for v, pred in enumerate(g.in_adj):
        for u in pred:
            c = chain_of[u]
            if stamp[c] != v or pos_of[u] > pos_of[best[c]]:
                stamp[c] = v
                best[c] = u
        for u in pred:
            if best[chain_of[u]] != u:
                drop_in.add((u, v))

    kept, removed, reasons = [], [], {}
    for e in g.edges():
        o, i = e in drop_out, e in drop_in
        if o or i:
            removed.append(e)
            reasons[e] = BOTH if o and i else (OUT if o else IN)
        else:
            kept.append(e)
    return PruneResult(kept, removed, reasons)


@dataclass(frozen=True)
class EredReport:
    e_red: int
    width: int
    n: int

    @property
    def bound(self) -> int:
        return self.width * self.n

    @property
    def holds(self) -> bool:
        return self.e_red <= self.bound

    @property
    def ratio(self) -> float:
        return self.e_red / self.bound if self.bound else 0.0


def check_ered_bound(g: Dag, width: int, r: ReachMatrix | None = None) -> EredReport:
    """Compare the exact number of non-transitive edges with ``width * n``."""
    if r is None:
        r = tc_dfs(g)
    red, _ = transitive_reduction(g, r)
    return EredReport(len(red), width, g.n)
