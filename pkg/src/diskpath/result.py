"""Output contract shared by the solvers and the reference oracle."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

NO_PRED = -1


@dataclass
class SsspResult:
    """Distances and shortest-path-tree predecessors from one source.

    ``dist[i]`` is the path length from the source to point ``i`` (inf
    when unreachable); ``pred[i]`` is the previous point on such a path,
    or ``NO_PRED`` for the source and unreachable points.
    """

    dist: np.ndarray
    pred: np.ndarray

    def __post_init__(self):
        self.dist = np.asarray(self.dist, dtype=np.float64)
        self.pred = np.asarray(self.pred, dtype=np.int64)
        if self.dist.shape != self.pred.shape:
            raise ValueError("dist and pred must have the same length")
