"""Planar points, the half-unit grid, and cell bucketing.

Two points of an instance are adjacent when their Euclidean distance is
at most 1 (the weighted unit-disk graph; the edge weight is that
distance).  Everything downstream shares the conventions fixed here:

* Grid cells of side ``s`` are half-open squares
  ``[i*s, (i+1)*s) x [j*s, (j+1)*s)``, so a point on a grid line belongs
  to the cell above/right of it.  No general-position assumption needed.
* The coarse grid has side 1/2.  The 5x5 block of cells centered on a
  point's cell (its *patch*) contains every point within distance 1 of
  it, and any two points sharing a cell are within distance 1 of each
  other (cell diameter is sqrt(2)/2).
* Instances are translated so the source sits at ``(n, n)``.  A point
  that then falls outside ``K = [0, 2n]^2`` is farther than ``n - 1``
  from the source, which exceeds the length of any simple path in the
  graph, so it is certainly unreachable and is kept out of the grid.

Cell location is ``floor(x / side)``.  ``simulated_floor`` computes the
floor with comparisons, additions, subtractions and halving/doubling
only; the solvers can run entirely on it (``use_simulated_floor=True``)
and produce output identical to the native-floor build.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

GAMMA = 0.5  # side length of the coarse grid

# cell offsets covering the 5x5 patch, in a fixed scan order
PATCH_OFFSETS = tuple((dc, dr) for dc in range(-2, 3) for dr in range(-2, 3))


class Point(NamedTuple):
    x: float
    y: float


class GridIndex(NamedTuple):
    """Address of the half-open cell [col*side, (col+1)*side) x [row*side, ...)."""

    col: int
    row: int
    side: float

    @property
    def x0(self) -> float:
        return self.col * self.side

    @property
    def y0(self) -> float:
        return self.row * self.side


@dataclass(frozen=True)
class PointSet:
    """An ordered planar point set with a designated source index.

    ``unreachable`` is filled in by :func:`normalize_points`: a boolean
    mask of points lying outside the square K that the normalization
    argument proves unreachable.  It is None for raw (untranslated)
    instances.
    """

    points: np.ndarray
    source: int
    unreachable: np.ndarray | None = field(default=None)

    def __post_init__(self):
        pts = np.ascontiguousarray(np.asarray(self.points, dtype=np.float64))
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise ValueError("points must be an (n, 2) array")
        if pts.shape[0] < 1:
            raise ValueError("point set must contain at least one point")
        if not np.isfinite(pts).all():
            raise ValueError("point coordinates must be finite")
        src = int(self.source)
        if not 0 <= src < pts.shape[0]:
            raise ValueError(f"source index {src} out of range")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "source", src)
        if self.unreachable is not None:
            m = np.asarray(self.unreachable, dtype=bool)
            if m.shape != (pts.shape[0],):
                raise ValueError("unreachable mask must have one entry per point")
            object.__setattr__(self, "unreachable", m)

    def __len__(self) -> int:
        return self.points.shape[0]


@dataclass
class CellBuckets:
    """Per-cell point index lists for one grid resolution.

    ``cells`` maps ``(col, row)`` to the indices located in that cell;
    ``point_cells`` is the reverse map, an (n, 2) array of ``(col, row)``
    per point with ``(-1, -1)`` rows for points excluded from the grid
    (the unreachable ones).
    """

    side: float
    cells: dict[tuple[int, int], np.ndarray]
    point_cells: np.ndarray


def simulated_floor(r: float) -> int:
    """Greatest integer <= r, without calling a native floor.

    Only comparisons, additions, subtractions and halving/doubling are
    used: find the smallest power of two above ``r``, then peel off the
    binary digits of the integer part.  All intermediate values are
    exactly representable, so the result always equals ``math.floor(r)``.
    """
    r = float(r)
    if math.isnan(r) or math.isinf(r) or r < 0.0:
        raise ValueError(f"simulated_floor requires a finite nonnegative value, got {r!r}")
    if r >= 2.0**53:
        # every float this large is already an integer
        return int(r)
    u = 1.0
    while u <= r:
        u += u
    acc = 0.0
    while u > 1.0:
        u *= 0.5
        if r >= u:
            r -= u
            acc += u
    return int(acc)


def normalize_points(ps: PointSet) -> PointSet:
    """Translate so the source lands at (n, n); flag points outside K.

    Points outside ``K = [0, 2n]^2`` after the shift are farther than
    ``n - 1`` from the source and hence unreachable; they are retained
    (indices never shift) but marked in the returned set's
    ``unreachable`` mask.
    """
    pts = ps.points
    n = pts.shape[0]
    shift = np.array([float(n), float(n)]) - pts[ps.source]
    moved = pts + shift
    k = 2.0 * n
    outside = (
        (moved[:, 0] < 0.0)
        | (moved[:, 0] > k)
        | (moved[:, 1] < 0.0)
        | (moved[:, 1] > k)
    )
    return PointSet(moved, ps.source, unreachable=outside)


def locate_cell(p, side: float, floor_fn=math.floor) -> GridIndex:
    """Half-open grid cell containing ``p`` for the given cell side."""
    if side <= 0.0:
        raise ValueError("cell side must be positive")
    x, y = float(p[0]), float(p[1])
    return GridIndex(int(floor_fn(x / side)), int(floor_fn(y / side)), side)


def _locate_all(pts: np.ndarray, side: float, use_simulated_floor: bool) -> np.ndarray:
    """(n, 2) array of (col, row) for every point."""
    if use_simulated_floor:
        out = np.empty((pts.shape[0], 2), dtype=np.int64)
        for i in range(pts.shape[0]):
            out[i, 0] = simulated_floor(pts[i, 0] / side)
            out[i, 1] = simulated_floor(pts[i, 1] / side)
        return out
    return np.floor(pts / side).astype(np.int64)


def build_buckets(
    ps: PointSet, side: float = GAMMA, use_simulated_floor: bool = False
) -> CellBuckets:
    """Index every (reachable) point of a normalized set into its grid cell."""
    pts = ps.points
    n = pts.shape[0]
    keep = np.arange(n)
    if ps.unreachable is not None and ps.unreachable.any():
        keep = keep[~ps.unreachable]
    point_cells = np.full((n, 2), -1, dtype=np.int64)
    if keep.size:
        point_cells[keep] = _locate_all(pts[keep], side, use_simulated_floor)

    cells: dict[tuple[int, int], np.ndarray] = {}
    if keep.size:
        cols = point_cells[keep, 0]
        rows = point_cells[keep, 1]
        order = np.lexsort((keep, rows, cols))
        sk = keep[order]
        sc = cols[order]
        sr = rows[order]
        change = np.flatnonzero((np.diff(sc) != 0) | (np.diff(sr) != 0)) + 1
        starts = np.concatenate(([0], change, [sk.size]))
        for a, b in zip(starts[:-1], starts[1:]):
            cells[(int(sc[a]), int(sr[a]))] = sk[a:b].copy()
    return CellBuckets(side=side, cells=cells, point_cells=point_cells)


def patch_points(b: CellBuckets, c) -> np.ndarray:
    """Indices in the 5x5 patch of cells centered at ``c`` (a (col, row))."""
    col, row = int(c[0]), int(c[1])
    found = []
    for dc, dr in PATCH_OFFSETS:
        arr = b.cells.get((col + dc, row + dr))
        if arr is not None:
            found.append(arr)
    if not found:
        return np.empty(0, dtype=np.int64)
    if len(found) == 1:
        return found[0]
    return np.concatenate(found)
