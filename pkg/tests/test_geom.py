import math

import numpy as np
import pytest

from diskpath.geom import (
    CellBuckets,
    PointSet,
    build_buckets,
    locate_cell,
    normalize_points,
    patch_points,
    simulated_floor,
)


def test_simulated_floor_basics():
    assert simulated_floor(0.0) == 0
    assert simulated_floor(3.7) == 3
    assert simulated_floor(1024.0) == 1024
    assert simulated_floor(0.999999) == 0
    assert simulated_floor(2.0**52 + 0.5) == 2**52


@pytest.mark.parametrize("bad", [-1.0, -1e-300, math.nan, math.inf])
def test_simulated_floor_rejects_bad_input(bad):
    with pytest.raises(ValueError):
        simulated_floor(bad)


def test_simulated_floor_matches_native():
    rng = np.random.default_rng(1)
    vals = rng.uniform(0.0, 2.0**30, size=100_000)
    # salt with values near integer boundaries
    ints = rng.integers(0, 2**30, size=1000).astype(np.float64)
    for eps in (0.0, 1e-12, -1e-12):
        for v in ints[:50] + eps:
            if v >= 0:
                assert simulated_floor(v) == math.floor(v)
    for v in vals:
        assert simulated_floor(v) == math.floor(v)


def test_locate_cell_examples():
    assert locate_cell((0.7, 0.3), 0.5)[:2] == (1, 0)
    assert locate_cell((0.5, 0.5), 0.5)[:2] == (1, 1)  # half-open boundary
    assert locate_cell((1.99, 0.01), 0.5)[:2] == (3, 0)


def test_locate_cell_simulated_floor_agrees():
    rng = np.random.default_rng(2)
    for _ in range(500):
        p = rng.uniform(0.0, 50.0, 2)
        side = float(rng.uniform(0.01, 3.0))
        assert locate_cell(p, side) == locate_cell(p, side, floor_fn=simulated_floor)


def test_pointset_validation():
    with pytest.raises(ValueError):
        PointSet(np.empty((0, 2)), 0)
    with pytest.raises(ValueError):
        PointSet(np.array([[0.0, np.inf]]), 0)
    with pytest.raises(ValueError):
        PointSet(np.array([[0.0, 0.0]]), 3)
    with pytest.raises(ValueError):
        PointSet(np.array([1.0, 2.0, 3.0]), 0)


def test_normalize_single_point():
    ps = normalize_points(PointSet(np.array([[5.0, -3.0]]), 0))
    assert ps.points[0] == pytest.approx([1.0, 1.0])
    assert not ps.unreachable.any()


def test_normalize_flags_far_points():
    ps = normalize_points(PointSet(np.array([[0.0, 0.0], [100.0, 0.0]]), 0))
    assert ps.unreachable.tolist() == [False, True]

    ps = normalize_points(PointSet(np.array([[0.0, 0.0], [0.5, 0.0]]), 0))
    assert ps.unreachable.tolist() == [False, False]


def test_buckets_coincident_points():
    ps = normalize_points(PointSet(np.array([[0.2, 0.2]] * 3), 0))
    b = build_buckets(ps)
    assert len(b.cells) == 1
    (members,) = b.cells.values()
    assert sorted(members.tolist()) == [0, 1, 2]


def test_buckets_split_cells():
    ps = PointSet(np.array([[0.1, 0.1], [0.6, 0.1]]), 0)
    b = build_buckets(ps)
    assert len(b.cells) == 2
    assert all(len(v) == 1 for v in b.cells.values())
    assert b.cells.get((40, 40)) is None  # untouched cell


def test_bucket_membership_matches_locate():
    rng = np.random.default_rng(3)
    pts = rng.uniform(0.0, 20.0, (400, 2))
    ps = PointSet(pts, 0)
    b = build_buckets(ps)
    for i in range(len(ps)):
        gi = locate_cell(pts[i], 0.5)
        assert i in b.cells[(gi.col, gi.row)].tolist()
        assert tuple(b.point_cells[i]) == (gi.col, gi.row)


def test_patch_examples():
    ps = PointSet(np.array([[0.1, 0.1], [1.9, 0.1]]), 0)
    b = build_buckets(ps)
    assert patch_points(b, (0, 0)).tolist() == [0]  # (1.9, .) is outside the 5x5

    ps = PointSet(np.array([[0.1, 0.1], [1.2, 0.1]]), 0)
    b = build_buckets(ps)
    assert sorted(patch_points(b, (0, 0)).tolist()) == [0, 1]

    assert patch_points(b, (500, 500)).size == 0


def test_patch_contains_all_neighbors():
    # every point within distance 1 is in the patch, and cellmates are
    # always within distance 1
    rng = np.random.default_rng(4)
    for trial in range(5):
        n = int(rng.integers(10, 500))
        pts = rng.uniform(0.0, 6.0, (n, 2))
        b = build_buckets(PointSet(pts, 0))
        for i in range(n):
            key = tuple(b.point_cells[i])
            in_patch = set(patch_points(b, key).tolist())
            d = np.sqrt(((pts - pts[i]) ** 2).sum(axis=1))
            for j in np.flatnonzero(d <= 1.0):
                assert int(j) in in_patch
            for j in b.cells[key]:
                assert d[j] <= 1.0


def test_buckets_exclude_unreachable():
    ps = normalize_points(PointSet(np.array([[0.0, 0.0], [500.0, 0.0]]), 0))
    b = build_buckets(ps)
    assert sum(v.size for v in b.cells.values()) == 1
    assert tuple(b.point_cells[1]) == (-1, -1)


def test_buckets_simulated_floor_identical():
    rng = np.random.default_rng(5)
    pts = rng.uniform(0.0, 10.0, (200, 2))
    ps = normalize_points(PointSet(pts, 0))
    b1 = build_buckets(ps)
    b2 = build_buckets(ps, use_simulated_floor=True)
    assert b1.cells.keys() == b2.cells.keys()
    assert np.array_equal(b1.point_cells, b2.point_cells)
    for k in b1.cells:
        assert np.array_equal(b1.cells[k], b2.cells[k])
