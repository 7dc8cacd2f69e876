"""Random DAG generators: Erdős–Rényi, Barabási–Albert, Watts–Strogatz, path-based.

Every generator draws from ``numpy.random.Generator(PCG64(seed))`` and
orients each undirected edge from the lower to the higher vertex id, so the
output is acyclic by construction.  A fixed ``(params, seed)`` pair yields a
bit-identical graph.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import ParamError
from .graph import Dag

__all__ = [
    "PRNG_ALGORITHM",
    "GenSpec",
    "make_rng",
    "gen_er",
    "gen_ba",
    "gen_ws",
    "gen_pb",
    "generate",
    "er_probability",
]

PRNG_ALGORITHM = "PCG64"
MODELS = ("er", "ba", "ws", "pb")


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(int(seed)))


def er_probability(n: int, avg_degree: float) -> float:
    """Edge probability giving ``avg_degree`` directed edges per vertex."""
    if n < 2:
        return 0.0
    return min(1.0, 2.0 * avg_degree / (n - 1))


def gen_er(n: int, p: float, seed: int) -> Dag:
    """G(n, p) over unordered pairs, oriented low id -> high id.

    Pairs are enumerated lexicographically and sampled by geometric skipping,
    so the cost is proportional to the number of edges rather than ``n**2``.
    """
    if not 0.0 <= p <= 1.0:
        raise ParamError(f"p must lie in [0, 1], got {p}")
    if n < 1:
        raise ParamError("n must be at least 1")
    total = n * (n - 1) // 2
    if p == 0.0 or total == 0:
        return Dag(n, ())
    rng = make_rng(seed)
    if p == 1.0:
        picks = np.arange(total, dtype=np.int64)
    else:
        chunks = []
        last = -1
        batch = int(p * total + 10 * math.sqrt(p * total) + 64)
        while last < total:
            gaps = rng.geometric(p, size=batch)
            pos = last + np.cumsum(gaps)
            chunks.append(pos)
            last = int(pos[-1])
        picks = np.concatenate(chunks)
        picks = picks[picks < total]
    # row i holds pairs (i, i+1..n-1) and starts at i*(2n-i-1)/2
    rows = np.arange(n, dtype=np.int64)
    starts = rows * (2 * n - rows - 1) // 2
    src = np.searchsorted(starts, picks, side="right") - 1
    dst = picks - starts[src] + src + 1
    return Dag(n, np.stack([src, dst], axis=1))


def _sample_distinct(rng: np.random.Generator, population: list[int], k: int) -> list[int]:
    chosen: list[int] = []
    seen = set()
    size = len(population)
    while len(chosen) < k:
        x = population[int(rng.integers(size))]
        if x not in seen:
            seen.add(x)
            chosen.append(x)
    return chosen


def gen_ba(n: int, m_attach: int, seed: int) -> Dag:
    """Preferential attachment growth, oriented low id -> high id.

    Starts from ``m_attach`` isolated core vertices; vertex ``m_attach`` links
    to all of them, later vertices pick ``m_attach`` distinct targets with
    probability proportional to current degree.  Produces exactly
    ``m_attach * (n - m_attach)`` edges.
    """
    if not 1 <= m_attach < n:
        raise ParamError(f"need 1 <= m_attach < n, got m_attach={m_attach}, n={n}")
    rng = make_rng(seed)
    targets = list(range(m_attach))
    repeated: list[int] = []
    edges = []
    for source in range(m_attach, n):
        edges.extend((t, source) for t in targets)
        repeated.extend(targets)
        repeated.extend([source] * m_attach)
        targets = _sample_distinct(rng, repeated, m_attach)
    return Dag(n, edges)


def gen_ws(n: int, k: int, b: float, seed: int) -> Dag:
    """Ring lattice with ``k`` nearest neighbours, each edge rewired with prob. ``b``.

    A rewired edge ``(u, v)`` becomes ``(u, w)`` for a uniform ``w`` that is
    neither ``u`` nor already adjacent to ``u``.  Edges are then oriented
    low id -> high id.
    """
    if k % 2 or not 0 <= k < n:
        raise ParamError(f"k must be even with 0 <= k < n, got k={k}, n={n}")
    if not 0.0 <= b <= 1.0:
        raise ParamError(f"b must lie in [0, 1], got {b}")
    rng = make_rng(seed)
    adj: list[set[int]] = [set() for _ in range(n)]
    for j in range(1, k // 2 + 1):
        for u in range(n):
            v = (u + j) % n
            adj[u].add(v)
            adj[v].add(u)
    for j in range(1, k // 2 + 1):
        for u in range(n):
            v = (u + j) % n
            if rng.random() >= b or v not in adj[u] or len(adj[u]) >= n - 1:
                continue
            w = int(rng.integers(n))
            while w == u or w in adj[u]:
                w = int(rng.integers(n))
            adj[u].discard(v)
            adj[v].discard(u)
            adj[u].add(w)
            adj[w].add(u)
    edges = sorted((u, v) for u in range(n) for v in adj[u] if u < v)
    return Dag(n, edges)


def gen_pb(n: int, path_count: int, avg_degree: float, seed: int) -> Dag:
    """Path-based model: random paths first, then uniform extra edges.

    The vertices are split uniformly at random into ``path_count`` nonempty
    groups; each group, sorted by id, becomes a path.  Uniform low->high
    edges are added until ``round(avg_degree * n)`` edges exist.
    """
    if not 1 <= path_count <= n:
        raise ParamError(f"need 1 <= path_count <= n, got {path_count}")
    target = int(round(avg_degree * n))
    base = n - path_count
    if target < base:
        raise ParamError(f"avg_degree {avg_degree} too small to hold {path_count} paths over {n} vertices")
    if target > n * (n - 1) // 2:
        raise ParamError(f"avg_degree {avg_degree} exceeds the complete DAG on {n} vertices")
    rng = make_rng(seed)
    perm = rng.permutation(n)
    cuts = np.sort(rng.choice(np.arange(1, n), size=path_count - 1, replace=False)) if path_count > 1 else []
    edges = []
    present = set()
    for group in np.split(perm, cuts):
        members = np.sort(group).tolist()
        for u, v in zip(members, members[1:]):
            edges.append((u, v))
            present.add(u * n + v)
    while len(edges) < target:
        u, v = (int(x) for x in rng.integers(n, size=2))
        if u == v:
            continue
        if u > v:
            u, v = v, u
        code = u * n + v
        if code in present:
            continue
        present.add(code)
        edges.append((u, v))
    return Dag(n, edges)


@dataclass(frozen=True)
class GenSpec:
    """A generator model plus parameters; unspecified parameters follow ``avg_degree``.

    ``avg_degree`` means directed edges per vertex (``m / n``): ER uses
    ``p = 2d/(n-1)``, BA uses ``m = round(d)``, WS uses ``k = 2*round(d)``.
    """

    model: str
    n: int
    avg_degree: float = 5.0
    seed: int = 0
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.model not in MODELS:
            raise ParamError(f"unknown model {self.model!r}; expected one of {MODELS}")
        if self.n < 1:
            raise ParamError("n must be at least 1")
        if self.avg_degree < 0:
            raise ParamError("avg_degree must be non-negative")

    def resolved_params(self) -> dict:
        p = dict(self.params)
        d = self.avg_degree
        if self.model == "er":
            p.setdefault("p", er_probability(self.n, d))
        elif self.model == "ba":
            p.setdefault("m", max(1, min(self.n - 1, int(round(d)))))
        elif self.model == "ws":
            p.setdefault("k", 2 * int(round(d)))
            p.setdefault("b", 0.3)
        else:
            p.setdefault("paths", max(1, self.n // 40))
        return p

    def with_seed(self, seed: int) -> "GenSpec":
        return GenSpec(self.model, self.n, self.avg_degree, seed, dict(self.params))


def generate(spec: GenSpec) -> Dag:
    p = spec.resolved_params()
    if spec.model == "er":
        return gen_er(spec.n, p["p"], spec.seed)
    if spec.model == "ba":
        return gen_ba(spec.n, p["m"], spec.seed)
    if spec.model == "ws":
        return gen_ws(spec.n, p["k"], p["b"], spec.seed)
    return gen_pb(spec.n, p["paths"], spec.avg_degree, spec.seed)
