"""Scikit-learn style front end for the unit-disk shortest-path solvers."""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .approx import sssp_approx
from .exact import sssp_exact
from .geom import PointSet
from .result import NO_PRED


class UnitDiskShortestPaths(BaseEstimator):
    """Single-source shortest paths in the unit-disk graph of a point set.

    Vertices are the rows of ``X`` (planar coordinates); two vertices
    are adjacent when their Euclidean distance is at most 1, weighted by
    that distance.  ``fit`` solves from the ``source`` row and exposes
    the distances and the shortest-path tree as attributes, in the same
    spirit as clustering estimators that compute ``labels_`` on fit.

    Parameters
    ----------
    algorithm : {"exact", "approx"}, default="exact"
        "exact" returns true distances; "approx" returns distances
        within a factor ``1 + eps`` of the truth, never below it.
    eps : float, default=0.1
        Relative error bound for ``algorithm="approx"``; ignored
        otherwise.
    source : int, default=0
        Row index of the source vertex.

    Attributes
    ----------
    distances_ : ndarray of shape (n_samples,)
        Path length from the source to each vertex; inf if unreachable.
    predecessors_ : ndarray of shape (n_samples,)
        Previous vertex on the path, or -1 for the source and
        unreachable vertices.
    n_features_in_ : int
        Always 2.

    Examples
    --------
    >>> pts = [[0.0, 0.0], [0.8, 0.0], [1.6, 0.0]]
    >>> m = UnitDiskShortestPaths().fit(pts)
    >>> m.distances_.round(1).tolist()
    [0.0, 0.8, 1.6]
    """

    def __init__(self, algorithm: str = "exact", eps: float = 0.1, source: int = 0):
        self.algorithm = algorithm
        self.eps = eps
        self.source = source

    def fit(self, X, y=None):
        """Solve shortest paths on the point set ``X``."""
        X = check_array(X, dtype=np.float64, ensure_min_samples=1)
        if X.shape[1] != 2:
            raise ValueError(f"expected planar points of shape (n, 2), got {X.shape}")
        if self.algorithm not in ("exact", "approx"):
            raise ValueError(f"algorithm must be 'exact' or 'approx', got {self.algorithm!r}")
        if not 0 <= int(self.source) < X.shape[0]:
            raise ValueError(f"source index {self.source} out of range for {X.shape[0]} points")
        ps = PointSet(X, int(self.source))
        if self.algorithm == "exact":
            res = sssp_exact(ps)
        else:
            if not float(self.eps) > 0.0:
                raise ValueError("eps must be positive for the approximate algorithm")
            res = sssp_approx(ps, float(self.eps))
        self.distances_ = res.dist
        self.predecessors_ = res.pred
        self.n_features_in_ = 2
        return self

    def path(self, i: int) -> list[int]:
        """Vertex indices from the source to ``i`` along the fitted tree.

        Empty when ``i`` is unreachable.
        """
        check_is_fitted(self, "distances_")
        if not 0 <= i < self.distances_.shape[0]:
            raise ValueError(f"vertex index {i} out of range")
        if not np.isfinite(self.distances_[i]):
            return []
        chain = [i]
        while self.predecessors_[chain[-1]] != NO_PRED:
            chain.append(int(self.predecessors_[chain[-1]]))
        chain.reverse()
        return chain
