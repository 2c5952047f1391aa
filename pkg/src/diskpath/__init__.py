"""Shortest paths in weighted unit-disk graphs.

Vertices are planar points; two are adjacent when their Euclidean
distance is at most 1, weighted by that distance.  The package provides
an exact solver, a (1+eps)-approximate solver with a bounded-insertion
weighted nearest-neighbor core, a plain Dijkstra oracle for validation,
a scikit-learn style estimator, and a CLI.
"""
from .approx import approx_push_update, select_representatives, sssp_approx
from .envelope import Envelope, first_cover, first_cover_multicell
from .estimator import UnitDiskShortestPaths
from .exact import pull_update, push_update, sssp_exact
from .geom import (
    CellBuckets,
    GridIndex,
    Point,
    PointSet,
    build_buckets,
    locate_cell,
    normalize_points,
    patch_points,
    simulated_floor,
)
from .oracle import (
    ExplicitGraph,
    ValidationReport,
    build_explicit_graph,
    dijkstra_baseline,
    validate,
)
from .result import NO_PRED, SsspResult
from .wnn import Insert, Query, StaticWnn, WeightedSite, offline_solve, wnn_brute

__version__ = "0.1.0"

__all__ = [
    "CellBuckets",
    "Envelope",
    "ExplicitGraph",
    "GridIndex",
    "Insert",
    "NO_PRED",
    "Point",
    "PointSet",
    "Query",
    "SsspResult",
    "StaticWnn",
    "UnitDiskShortestPaths",
    "ValidationReport",
    "WeightedSite",
    "approx_push_update",
    "build_buckets",
    "build_explicit_graph",
    "dijkstra_baseline",
    "first_cover",
    "first_cover_multicell",
    "locate_cell",
    "normalize_points",
    "offline_solve",
    "patch_points",
    "pull_update",
    "push_update",
    "select_representatives",
    "simulated_floor",
    "sssp_approx",
    "sssp_exact",
    "validate",
    "wnn_brute",
]
