import statistics

import pytest
from hypothesis import given

from dagchain import (
    ChainDecomposition,
    Dag,
    InvalidDecomposition,
    check_ered_bound,
    decompose_co,
    decompose_h3_conc,
    gen_er,
    prune_transitive,
    tc_dfs,
    topo_sort,
    width_fulkerson,
)
from dagchain.bench import ALGORITHMS, run_pipeline
from dagchain.generators import er_probability
from helpers import complete, dag_strategy, path, transitive_edges


def test_triangle():
    g = Dag(3, [(0, 1), (1, 2), (0, 2)])
    res = prune_transitive(g, ChainDecomposition.from_chains([[0, 1, 2]], 3))
    assert res.removed == [(0, 2)]
    assert res.reasons[(0, 2)] == "both"
    assert sorted(res.kept) == [(0, 1), (1, 2)]


def test_star_keeps_everything():
    g = Dag(3, [(0, 1), (0, 2)])
    res = prune_transitive(g, ChainDecomposition.from_chains([[0, 1], [2]], 3, mode="path"))
    assert res.removed == []


def test_in_pass_catches_what_out_pass_misses():
    # 0 -> 2 is dropped by the in-pass only: 0 and 1 share a chain, 1 is higher
    g = Dag(3, [(0, 1), (1, 2), (0, 2)])
    d = ChainDecomposition.from_chains([[0, 1], [2]], 3, mode="path")
    res = prune_transitive(g, d)
    assert res.reasons == {(0, 2): "in"}


def test_both_passes():
    g = complete(3)
    res = prune_transitive(g, ChainDecomposition.from_chains([[0], [1], [2]], 3))
    assert res.removed == []
    g = complete(4)
    res = prune_transitive(g, ChainDecomposition.from_chains([[0, 1, 2, 3]], 4))
    assert sorted(res.removed) == [(0, 2), (0, 3), (1, 3)]
    assert set(res.reasons.values()) == {"both"}


def test_rejects_invalid_decomposition():
    g = path(3)
    with pytest.raises(InvalidDecomposition):
        prune_transitive(g, ChainDecomposition.from_chains([[2, 1, 0]], 3))


@pytest.mark.parametrize("seed", range(3))
def test_er_500_soundness(seed):
    g = gen_er(500, er_probability(500, 10), seed)
    t = topo_sort(g)
    d, _ = decompose_h3_conc(g, t)
    res = prune_transitive(g, d, t)
    assert set(res.removed) <= transitive_edges(g)
    assert len(res.kept) <= d.k * g.n


@pytest.mark.parametrize("algo", ALGORITHMS)
@given(g=dag_strategy())
def test_sound_and_closure_preserving(algo, g):
    t = topo_sort(g)
    d, _ = run_pipeline(g, t, algo)
    res = prune_transitive(g, d, t)
    assert sorted(res.kept + res.removed) == sorted(g.edges())
    assert set(res.removed) <= transitive_edges(g)
    assert tc_dfs(res.pruned_graph(g.n)) == tc_dfs(g)
    assert len(res.kept) <= d.k * g.n


class TestEredBound:
    def test_path(self):
        rep = check_ered_bound(path(5), 1)
        assert (rep.e_red, rep.bound, rep.holds) == (4, 5, True)

    def test_complete(self):
        rep = check_ered_bound(complete(4), 1)
        assert (rep.e_red, rep.bound) == (3, 4)

    def test_er_500_dense(self):
        ratios = []
        for seed in range(3):
            g = gen_er(500, er_probability(500, 20), seed)
            r = tc_dfs(g)
            rep = check_ered_bound(g, width_fulkerson(g, r).width, r)
            assert rep.holds
            ratios.append(rep.ratio)
        assert statistics.median(ratios) < 1.0

    @given(dag_strategy())
    def test_holds_everywhere(self, g):
        if g.n:
            assert check_ered_bound(g, width_fulkerson(g).width).holds
