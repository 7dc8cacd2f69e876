"""scikit-learn style wrappers around decomposition, pruning and indexing.

The "samples" here are graphs: ``fit`` takes anything :func:`check_dag`
accepts and learns a structure for that graph.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .bench import ALGORITHMS, run_pipeline
from .exceptions import ParamError
from .graph import Dag, sort_adjacency, topo_sort
from .index import build_index
from .prune import prune_transitive
from .validation import check_dag, check_pairs

__all__ = ["ChainDecomposer", "TransitiveEdgePruner", "ReachabilityIndex"]


def _check_algorithm(name: str) -> None:
    if name not in ALGORITHMS:
        raise ParamError(f"unknown algorithm {name!r}; expected one of {ALGORITHMS}")


class ChainDecomposer(TransformerMixin, BaseEstimator):
    """Decompose a DAG into vertex-disjoint chains.

    Parameters
    ----------
    algorithm : {"co", "no", "h3", "co-conc", "no-conc", "h3-conc"}
        Plain names give path decompositions, ``-conc`` variants chain
        decompositions.

    Attributes
    ----------
    decomposition_ : ChainDecomposition
    n_chains_ : int
    concat_stats_ : ConcatStats or None
    """

    def __init__(self, algorithm="h3-conc"):
        self.algorithm = algorithm

    def fit(self, X, y=None):
        _check_algorithm(self.algorithm)
        g = check_dag(X)
        self.topo_order_ = topo_sort(g)
        self.decomposition_, self.concat_stats_ = run_pipeline(g, self.topo_order_, self.algorithm)
        self.n_chains_ = self.decomposition_.k
        self.n_vertices_ = g.n
        return self

    def transform(self, X):
        """Per-vertex ``(chain id, 1-based position)`` as an ``(n, 2)`` array."""
        check_is_fitted(self)
        if check_dag(X).n != self.n_vertices_:
            raise ValueError("transform expects the graph the decomposer was fitted on")
        d = self.decomposition_
        return np.column_stack([d.chain_of, d.pos_of]).astype(np.int64)


class TransitiveEdgePruner(TransformerMixin, BaseEstimator):
    """Drop a linear-time detectable subset of transitive edges.

    ``transform`` returns the pruned :class:`Dag`, which has the same
    reachability relation as the input.
    """

    def __init__(self, algorithm="h3-conc"):
        self.algorithm = algorithm

    def fit(self, X, y=None):
        _check_algorithm(self.algorithm)
        g = check_dag(X)
        t = topo_sort(g)
        d, _ = run_pipeline(g, t, self.algorithm)
        result = prune_transitive(g, d, t)
        self.decomposition_ = d
        self.removed_ = result.removed
        self.kept_ = result.kept
        self.reasons_ = result.reasons
        self.n_vertices_ = g.n
        return self

    def transform(self, X) -> Dag:
        check_is_fitted(self)
        if check_dag(X).n != self.n_vertices_:
            raise ValueError("transform expects the graph the pruner was fitted on")
        return Dag(self.n_vertices_, self.kept_, validate=False)


class ReachabilityIndex(BaseEstimator):
    """Constant-time reachability queries backed by a chain index.

    ``predict`` takes an ``(q, 2)`` array of ``(source, target)`` pairs and
    returns a boolean array.
    """

    def __init__(self, algorithm="h3-conc"):
        self.algorithm = algorithm

    def fit(self, X, y=None):
        _check_algorithm(self.algorithm)
        g = check_dag(X)
        t = topo_sort(g)
        d, _ = run_pipeline(g, t, self.algorithm)
        self.decomposition_ = d
        self.index_ = build_index(g, t, d, sort_adjacency(g, t))
        self.stats_ = self.index_.stats
        self.n_vertices_ = g.n
        return self

    def predict(self, X) -> np.ndarray:
        check_is_fitted(self)
        s, t = check_pairs(X, self.n_vertices_)
        return self.index_.query_many(s, t)

    def score(self, X, y) -> float:
        """Fraction of pairs whose predicted reachability matches ``y``."""
        return float(np.mean(self.predict(X) == np.asarray(y, dtype=bool)))
