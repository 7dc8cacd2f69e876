"""Input coercion for the estimator API."""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp
from sklearn.utils import check_array

from .exceptions import RangeError
from .graph import Dag


def check_dag(X) -> Dag:
    """Coerce ``X`` to a :class:`Dag`.

    Accepts a ``Dag``, an ``(n, edges)`` pair, or a square dense/sparse
    adjacency matrix whose nonzero ``[u, v]`` entries are edges.
    """
    if isinstance(X, Dag):
        return X
    if isinstance(X, tuple) and len(X) == 2 and np.isscalar(X[0]):
        return Dag(int(X[0]), X[1])
    if sp.issparse(X):
        A = sp.coo_matrix(X)
        if A.shape[0] != A.shape[1]:
            raise ValueError(f"adjacency matrix must be square, got {A.shape}")
        nz = A.data != 0
        return Dag(A.shape[0], np.stack([A.row[nz], A.col[nz]], axis=1))
    A = check_array(X, ensure_2d=True, ensure_min_samples=0, ensure_min_features=0, dtype=None)
    if A.shape[0] != A.shape[1]:
        raise ValueError(f"adjacency matrix must be square, got {A.shape}")
    rows, cols = np.nonzero(A)
    return Dag(A.shape[0], np.stack([rows, cols], axis=1))


def check_pairs(X, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Validate an ``(q, 2)`` array of ``(source, target)`` vertex pairs."""
    P = check_array(X, dtype=np.int64, ensure_min_samples=0)
    if P.shape[1] != 2:
        raise ValueError(f"pairs must have two columns, got {P.shape[1]}")
    if P.size and (P.min() < 0 or P.max() >= n):
        raise RangeError(f"pair vertex outside 0..{n - 1}")
    return P[:, 0], P[:, 1]
