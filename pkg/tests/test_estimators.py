import numpy as np
import pytest
import scipy.sparse as sp
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from dagchain import ChainDecomposer, Dag, ParamError, RangeError, ReachabilityIndex, TransitiveEdgePruner, gen_er, tc_dfs
from dagchain.validation import check_dag, check_pairs
from helpers import reach_dense

ESTIMATORS = [ChainDecomposer, TransitiveEdgePruner, ReachabilityIndex]


@pytest.fixture(scope="module")
def graph():
    return gen_er(150, 0.04, seed=8)


@pytest.mark.parametrize("cls", ESTIMATORS)
def test_params_round_trip(cls):
    est = cls(algorithm="co")
    assert est.get_params() == {"algorithm": "co"}
    assert clone(est).set_params(algorithm="no").algorithm == "no"


@pytest.mark.parametrize("cls", ESTIMATORS)
def test_unknown_algorithm(cls, graph):
    with pytest.raises(ParamError):
        cls(algorithm="best").fit(graph)


def test_not_fitted():
    with pytest.raises(NotFittedError):
        ReachabilityIndex().predict([[0, 0]])
    with pytest.raises(NotFittedError):
        ChainDecomposer().transform(Dag(1))


def test_decomposer_transform(graph):
    est = ChainDecomposer(algorithm="h3-conc").fit(graph)
    out = est.transform(graph)
    assert out.shape == (graph.n, 2)
    d = est.decomposition_
    assert est.n_chains_ == d.k
    assert est.concat_stats_.k_c == d.k
    for v in range(graph.n):
        assert d.chains[out[v, 0]][out[v, 1] - 1] == v


def test_fit_transform_matches(graph):
    est = ChainDecomposer(algorithm="no-conc")
    assert np.array_equal(est.fit_transform(graph), est.transform(graph))


def test_decomposer_plain_has_no_stats(graph):
    assert ChainDecomposer(algorithm="h3").fit(graph).concat_stats_ is None


def test_decomposer_rejects_other_graph(graph):
    est = ChainDecomposer().fit(graph)
    with pytest.raises(ValueError):
        est.transform(Dag(3))


def test_pruner_preserves_closure(graph):
    pruned = TransitiveEdgePruner().fit_transform(graph)
    assert pruned.m <= graph.m
    assert tc_dfs(pruned) == tc_dfs(graph)


def test_index_predict_and_score(graph):
    est = ReachabilityIndex().fit(graph)
    r = reach_dense(graph)
    rng = np.random.default_rng(0)
    pairs = rng.integers(0, graph.n, size=(500, 2))
    truth = r[pairs[:, 0], pairs[:, 1]]
    assert np.array_equal(est.predict(pairs), truth)
    assert est.score(pairs, truth) == 1.0
    assert est.stats_.k_c == est.decomposition_.k


def test_index_rejects_out_of_range(graph):
    est = ReachabilityIndex().fit(graph)
    with pytest.raises(RangeError):
        est.predict([[0, graph.n]])


class TestCheckDag:
    def test_pair(self):
        assert check_dag((3, [(0, 1)])).edges() == [(0, 1)]

    def test_dense(self):
        A = np.zeros((3, 3), dtype=int)
        A[0, 2] = A[1, 2] = 1
        assert sorted(check_dag(A).edges()) == [(0, 2), (1, 2)]

    def test_sparse(self):
        A = sp.csr_matrix(([1, 1], ([0, 1], [1, 2])), shape=(3, 3))
        assert sorted(check_dag(A).edges()) == [(0, 1), (1, 2)]

    def test_non_square(self):
        with pytest.raises(ValueError):
            check_dag(np.zeros((2, 3)))

    def test_pairs_shape(self):
        with pytest.raises(ValueError):
            check_pairs([[0, 1, 2]], 5)
