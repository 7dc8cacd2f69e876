"""Independent reference computations used across the test modules.

Everything here goes through networkx or plain brute force so that the
package's own oracles are never used to check themselves.
"""

from __future__ import annotations

from itertools import combinations

import networkx as nx
import numpy as np

from dagchain import Dag

MODELS = ("er", "ba", "ws", "pb")
SMALL_SIZES = (50, 100, 300)
SMALL_SEEDS = range(5)
SMALL_DEGREE = 5.0

ACCEPTANCE_LINES: list[str] = []


def report(number: int, ok: bool, detail: str) -> None:
    """Record one acceptance verdict for the terminal summary, then assert it."""
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def to_nx(g: Dag) -> nx.DiGraph:
    h = nx.DiGraph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    return h


def reach_dense(g: Dag) -> np.ndarray:
    """Reflexive reachability as an ``(n, n)`` bool array."""
    h = to_nx(g)
    out = np.zeros((g.n, g.n), dtype=bool)
    for s in range(g.n):
        out[s, list(nx.descendants(h, s))] = True
        out[s, s] = True
    return out


def transitive_edges(g: Dag) -> set[tuple[int, int]]:
    red = nx.transitive_reduction(to_nx(g))
    return set(g.edges()) - set(red.edges())


def brute_width(g: Dag) -> int:
    """Largest antichain by exhaustive search; only for tiny graphs."""
    r = reach_dense(g)
    comparable = r | r.T
    best = 1 if g.n else 0
    for size in range(2, g.n + 1):
        found = any(
            not any(comparable[a, b] for a, b in combinations(group, 2))
            for group in combinations(range(g.n), size)
        )
        if not found:
            break
        best = size
    return best


def diamond() -> Dag:
    return Dag(4, [(0, 1), (0, 2), (1, 3), (2, 3)])


def path(n: int) -> Dag:
    return Dag(n, [(i, i + 1) for i in range(n - 1)])


def complete(n: int) -> Dag:
    return Dag(n, list(combinations(range(n), 2)))


def dag_strategy(max_n: int = 24):
    """Hypothesis strategy for DAGs whose vertex ids are shuffled.

    Edges are drawn between positions of a hidden order and then relabelled,
    so the graphs are not already sorted by id.
    """
    from hypothesis import strategies as st

    @st.composite
    def build(draw):
        n = draw(st.integers(0, max_n))
        perm = draw(st.permutations(range(n)))
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
        chosen = draw(st.lists(st.sampled_from(pairs), max_size=3 * n, unique=True)) if pairs else []
        return Dag(n, [(perm[i], perm[j]) for i, j in chosen])

    return build()
