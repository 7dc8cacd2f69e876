import statistics
from collections import deque

import pytest
from hypothesis import given

from dagchain import (
    ChainDecomposition,
    Dag,
    concatenate,
    decompose_co,
    decompose_h3,
    decompose_h3_conc,
    decompose_no,
    gen_er,
    longest_path,
    reversed_dfs_lookup,
    topo_sort,
    width_fulkerson,
)
from dagchain.concat import LookupState
from dagchain.generators import er_probability
from helpers import dag_strategy, path, reach_dense


def state_for(g, tails):
    is_tail = [False] * g.n
    for v in tails:
        is_tail[v] = True
    return LookupState(g, topo_sort(g), is_tail)


def reverse_reachable_tails(g, start, is_tail):
    seen, queue, tails = {start}, deque([start]), set()
    while queue:
        v = queue.popleft()
        for u in g.in_adj[v]:
            if u not in seen:
                seen.add(u)
                if is_tail[u]:
                    tails.add(u)
                else:
                    queue.append(u)
    return tails


class TestLookup:
    def test_no_predecessors(self):
        g = Dag(2)
        assert reversed_dfs_lookup(g, 1, state_for(g, [0])) == ([1], [])

    def test_one_hop(self):
        g = Dag(4, [(0, 1), (2, 3), (1, 2)])
        assert reversed_dfs_lookup(g, 2, state_for(g, [1, 3])) == ([], [1, 2])

    def test_nearest_tail_wins(self):
        g = Dag(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)])
        st = state_for(g, [1, 3, 5])
        rest, p = reversed_dfs_lookup(g, 4, st)
        assert p == [3, 4]
        assert p[0] in reverse_reachable_tails(g, 4, st.is_tail)

    def test_dead_vertices_are_not_entered(self):
        g = Dag(3, [(0, 1), (1, 2)])
        st = state_for(g, [0])
        st.dead[1] = True
        assert reversed_dfs_lookup(g, 2, st) == ([2], [])

    def test_descending_rank_first(self):
        # 3 has predecessors 1 (tail) and 2 -> 0 (tail); 2 is explored first
        g = Dag(4, [(1, 3), (2, 3), (0, 2)])
        rest, p = reversed_dfs_lookup(g, 3, state_for(g, [0, 1]))
        assert p == [0, 2, 3]
        assert rest == []

    def test_failed_branch_is_reported(self):
        g = Dag(5, [(0, 4), (1, 2), (2, 4), (3, 4)])
        rest, p = reversed_dfs_lookup(g, 4, state_for(g, [0]))
        assert p == [0, 4]
        assert sorted(rest) == [1, 2, 3]

    @given(dag_strategy(16))
    def test_returned_tail_is_reachable(self, g):
        t = topo_sort(g)
        d = decompose_co(g, t)
        tails = [c[-1] for c in d.chains]
        for c in d.chains:
            st = state_for(g, tails)
            rest, p = reversed_dfs_lookup(g, c[0], st)
            if p:
                assert p[0] in reverse_reachable_tails(g, c[0], st.is_tail)
                assert p[-1] == c[0]
                assert all(g.has_edge(a, b) for a, b in zip(p, p[1:]))
                assert not set(rest) & set(p)
            else:
                assert not reverse_reachable_tails(g, c[0], st.is_tail)


class TestConcatenate:
    def test_single_chain_unchanged(self):
        g = path(4)
        out, stats = concatenate(g, decompose_co(g, topo_sort(g)))
        assert out.chains == ((0, 1, 2, 3),)
        assert stats.c == 0

    def test_direct_edge_merge(self):
        g = Dag(4, [(0, 1), (2, 3), (1, 2)])
        d = ChainDecomposition.from_chains([[0, 1], [2, 3]], 4, mode="path")
        out, stats = concatenate(g, d)
        assert out.chains == ((0, 1, 2, 3),)
        assert out.mode == "chain"
        assert (stats.c, stats.sum_path_len, stats.k_p, stats.k_c) == (1, 1, 2, 1)

    def test_merge_through_interior(self):
        # head 4 reaches tail 1 through interior vertex 3 of another chain
        g = Dag(6, [(0, 1), (2, 3), (3, 5), (1, 3), (3, 4)])
        d = ChainDecomposition.from_chains([[0, 1], [2, 3, 5], [4]], 6, mode="path")
        out, stats = concatenate(g, d)
        assert out.chains == ((0, 1, 4), (2, 3, 5))
        assert stats.sum_path_len == 2

    @pytest.mark.parametrize("seed", range(3))
    def test_co_on_er_is_valid_chain_decomposition(self, seed):
        g = gen_er(500, er_probability(500, 5), seed)
        t = topo_sort(g)
        d = decompose_co(g, t)
        out, stats = concatenate(g, d, t)
        out.validate(g, t)
        r = reach_dense(g)
        assert all(r[a, b] for c in out.chains for a, b in zip(c, c[1:]))
        assert out.k == d.k - stats.c

    def test_trace_sets_are_disjoint(self):
        g = gen_er(400, er_probability(400, 5), 1)
        t = topo_sort(g)
        _, stats = concatenate(g, decompose_no(g, t), t, record=True)
        seen = set()
        for _, retired, _ in stats.trace:
            assert not seen & set(retired)
            seen |= set(retired)
        assert stats.deleted == len(seen) <= g.n


class TestH3Conc:
    def test_path_graph(self):
        out, stats = decompose_h3_conc(path(5), topo_sort(path(5)))
        assert out.chains == ((0, 1, 2, 3, 4),)
        assert stats.c == 0
        assert stats.lookups == 1

    def test_immediate_predecessor_needs_no_lookup(self):
        g = Dag(4, [(0, 1), (2, 3), (1, 2)])
        out, stats = decompose_h3_conc(g, topo_sort(g))
        assert out.chains == ((0, 1, 2, 3),)
        assert stats.lookups == 1

    def test_lookup_joins_remote_tail(self):
        # 3 and 4 both hang off 1; 4 must find tail 3 via a longer route
        g = Dag(5, [(0, 1), (1, 2), (1, 3), (2, 4), (3, 4)])
        out, stats = decompose_h3_conc(g, topo_sort(g))
        out.validate(g, topo_sort(g))
        assert stats.k_p - stats.c == out.k

    def test_beats_co_conc_on_median(self):
        n = 2000
        p = er_probability(n, 10)
        h3, co = [], []
        for seed in range(20):
            g = gen_er(n, p, seed)
            t = topo_sort(g)
            h3.append(decompose_h3_conc(g, t)[0].k)
            co.append(concatenate(g, decompose_co(g, t), t)[0].k)
        assert statistics.median(h3) <= statistics.median(co)


PIPELINES = [
    lambda g, t: concatenate(g, decompose_co(g, t), t, record=True),
    lambda g, t: concatenate(g, decompose_no(g, t), t, record=True),
    lambda g, t: concatenate(g, decompose_h3(g, t), t, record=True),
    lambda g, t: decompose_h3_conc(g, t, record=True),
]


@pytest.mark.parametrize("pipe", PIPELINES, ids=["co-conc", "no-conc", "h3-post", "h3-conc"])
@given(g=dag_strategy())
def test_accounting_and_validity(pipe, g):
    t = topo_sort(g)
    out, stats = pipe(g, t)
    out.validate(g, t)
    r = reach_dense(g)
    assert all(r[a, b] for c in out.chains for a, b in zip(c, c[1:]))
    assert stats.c == stats.k_p - stats.k_c
    assert stats.k_c == out.k
    assert stats.deleted <= g.n
    assert stats.l == longest_path(g, t)
    assert stats.sum_path_len <= stats.c * stats.l
    retired = [v for _, rest, _ in stats.trace for v in rest]
    assert len(retired) == len(set(retired)) == stats.deleted
    if g.n:
        assert out.k >= width_fulkerson(g).width
