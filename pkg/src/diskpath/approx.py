"""(1+eps)-approximate shortest paths in weighted unit-disk graphs.

Same grid-batched frontier as the exact solver, with three changes that
trade an additive ``eps/2`` slack per hop for a bounded number of
weighted-NN insertions:

* direct neighbors of the source get their exact distances up front, so
  one-hop paths are never approximated;
* the chosen cell is corrected exactly (first from the surrounding
  patch, then within itself — the in-cell round restores the mutual
  consistency ``dist[u] <= dist[u'] + ||u'-u||`` the thinning step needs);
* the outward push thins the sorted cell members to one representative
  per fine-grid cell of side ``eps/8`` before streaming them into the
  offline weighted-NN solver.  A representative answers for its
  dropped cellmates within ``2 * cell diameter <= eps/2`` extra cost;
  when the stream answer falls outside a target's unit disk it is
  swapped for the target's own first-cover disk owner, which is a true
  neighbor and no worse.

Since a path with L edges has length at least (L-1)/2 in a unit-disk
graph, the accumulated slack stays within a factor (1+eps) of the true
distance, while the number of insertions per iteration is O(eps^-2)
regardless of the cell population.
"""
from __future__ import annotations

import heapq
import math

import numpy as np

from .envelope import first_cover
from .exact import _check_consistency, push_update, rebase_distances
from .geom import PointSet, build_buckets, normalize_points, patch_points, simulated_floor
from .result import NO_PRED, SsspResult
from .wnn import Insert, Query, WeightedSite, offline_solve

__all__ = ["sssp_approx", "approx_push_update", "select_representatives"]


def select_representatives(
    sorted_pts: np.ndarray, eps: float, use_simulated_floor: bool = False
) -> np.ndarray:
    """Mask of one member per occupied eps/8-cell: the last in sort order.

    ``sorted_pts`` must already be in ascending distance order; the kept
    member of a fine cell is the one with the largest sort position.
    """
    side = eps / 8.0
    k = sorted_pts.shape[0]
    if use_simulated_floor:
        keys = [
            (
                simulated_floor(sorted_pts[i, 0] / side),
                simulated_floor(sorted_pts[i, 1] / side),
            )
            for i in range(k)
        ]
    else:
        cells = np.floor(sorted_pts / side).astype(np.int64)
        keys = [(int(cells[i, 0]), int(cells[i, 1])) for i in range(k)]
    last: dict[tuple[int, int], int] = {}
    for i, key in enumerate(keys):
        last[key] = i
    mask = np.zeros(k, dtype=bool)
    mask[list(last.values())] = True
    return mask


def approx_push_update(
    pts,
    dist,
    pred,
    u_idx,
    v_idx,
    eps: float,
    cell: tuple[int, int] | None = None,
    use_simulated_floor: bool = False,
    debug: bool = False,
    counters: dict | None = None,
) -> np.ndarray:
    """Push ``u_idx`` distances onto the disjoint ``v_idx`` within eps/2 slack.

    All sources must share one coarse grid cell and already satisfy the
    mutual consistency bound among themselves.  Returns improved indices.
    """
    if u_idx.size == 0 or v_idx.size == 0:
        return np.empty(0, dtype=np.int64)
    w = dist[u_idx]
    finite = np.isfinite(w)
    if debug:
        assert finite.all(), "approximate push expects corrected (finite) sources"
        assert not np.isin(v_idx, u_idx).any(), "source and target sets overlap"
        _check_entry_spread(pts, dist, u_idx, counters)
    if not finite.any():
        return np.empty(0, dtype=np.int64)
    u_idx = u_idx[finite]
    w = w[finite]
    order = np.lexsort((u_idx, w))
    su = u_idx[order]
    sw = w[order]

    fc = first_cover(pts[su], pts[v_idx], cell=cell)
    grouped: dict[int, list[int]] = {}
    for vpos, i in enumerate(fc):
        if i >= 0:
            grouped.setdefault(int(i), []).append(vpos)
    if not grouped:
        return np.empty(0, dtype=np.int64)

    reps = select_representatives(pts[su], eps, use_simulated_floor)
    ops: list[Insert | Query] = []
    for i in range(su.size - 1, -1, -1):
        if reps[i]:
            ops.append(
                Insert(WeightedSite(pts[su[i], 0], pts[su[i], 1], sw[i], int(su[i])))
            )
        for vpos in grouped.get(i, ()):
            ops.append(Query((pts[v_idx[vpos], 0], pts[v_idx[vpos], 1]), vpos))
    answers = offline_solve(ops)

    improved = []
    for vpos, ans in answers.items():
        v = v_idx[vpos]
        i = int(fc[vpos])
        tag, val = ans  # the last sorted member is always a representative
        dx = pts[tag, 0] - pts[v, 0]
        dy = pts[tag, 1] - pts[v, 1]
        if dx * dx + dy * dy > 1.0:
            # stream winner out of reach: fall back to the covering disk owner
            tag = int(su[i])
            dx = pts[tag, 0] - pts[v, 0]
            dy = pts[tag, 1] - pts[v, 1]
            val = sw[i] + math.sqrt(dx * dx + dy * dy)
            if counters is not None:
                counters["fallbacks"] = counters.get("fallbacks", 0) + 1
        if debug:
            assert dx * dx + dy * dy <= 1.0, "approximate push chose a non-neighbor"
            _check_slack(pts, su, sw, v, tag, val, eps, counters)
        if val < dist[v]:
            dist[v] = val
            pred[v] = tag
            improved.append(v)
    return np.asarray(improved, dtype=np.int64)


def _check_entry_spread(pts, dist, u_idx, counters, rng_seed=0x5EED):
    """Entry condition: cost functions of two sources differ by <= 2*their gap."""
    k = u_idx.size
    if k < 2:
        return
    rng = np.random.default_rng(rng_seed + k)
    pairs = min(16, k * (k - 1) // 2)
    for _ in range(pairs):
        a, b = rng.choice(k, size=2, replace=False)
        ua, ub = u_idx[a], u_idx[b]
        probe = pts[ua] + rng.normal(0.0, 1.0, 2)
        da = dist[ua] + math.hypot(*(pts[ua] - probe))
        db = dist[ub] + math.hypot(*(pts[ub] - probe))
        gap = math.hypot(*(pts[ua] - pts[ub]))
        assert abs(da - db) <= 2.0 * gap + 1e-9, "source set lost mutual consistency"
    if counters is not None:
        counters["entry_checks"] = counters.get("entry_checks", 0) + 1


def _check_slack(pts, su, sw, v, tag, val, eps, counters):
    """Accepted cost is within eps/2 of the best in-disk source."""
    dx = pts[su, 0] - pts[v, 0]
    dy = pts[su, 1] - pts[v, 1]
    d = np.sqrt(dx * dx + dy * dy)
    ok = d <= 1.0
    assert ok.any()
    best = float(np.min(sw[ok] + d[ok]))
    assert val <= best + eps / 2.0 + 1e-9, "approximate push exceeded its slack"
    if counters is not None:
        counters["slack_checks"] = counters.get("slack_checks", 0) + 1


def sssp_approx(
    ps: PointSet,
    eps: float,
    *,
    use_simulated_floor: bool = False,
    debug: bool = False,
    counters: dict | None = None,
) -> SsspResult:
    """Distances within (1+eps) of the shortest paths, with a valid tree.

    Never underestimates; every predecessor edge is a real unit-disk
    edge and the chain lengths are self-consistent.  ``eps`` may be
    arbitrarily large (the thinning just gets coarser).
    """
    eps = float(eps)
    if not eps > 0.0:
        raise ValueError("eps must be positive")
    nps = normalize_points(ps)
    pts = nps.points
    n = len(nps)
    buckets = build_buckets(nps, use_simulated_floor=use_simulated_floor)
    point_cells = buckets.point_cells

    dist = np.full(n, np.inf)
    pred = np.full(n, NO_PRED, dtype=np.int64)
    removed = np.zeros(n, dtype=bool)
    src = nps.source
    dist[src] = 0.0
    heap: list[tuple[float, int]] = [(0.0, src)]

    # one-hop paths are exact: seed every direct neighbor of the source
    skey = (int(point_cells[src, 0]), int(point_cells[src, 1]))
    around = patch_points(buckets, skey)
    d = pts[around] - pts[src]
    dd = np.sqrt(d[:, 0] ** 2 + d[:, 1] ** 2)
    near = (dd <= 1.0) & (around != src)
    for i, w in zip(around[near], dd[near]):
        dist[i] = w
        pred[i] = src
        heapq.heappush(heap, (float(w), int(i)))

    seen_cells: set[tuple[int, int]] = set()
    while heap:
        dd_, c = heapq.heappop(heap)
        if removed[c] or dd_ != dist[c]:
            continue
        key = (int(point_cells[c, 0]), int(point_cells[c, 1]))
        if debug:
            assert key not in seen_cells, "a cell was chosen twice"
            seen_cells.add(key)
        cell_all = buckets.cells[key]
        cell_idx = cell_all[~removed[cell_all]]
        patch_all = patch_points(buckets, key)
        patch_idx = patch_all[~removed[patch_all]]
        outer = (point_cells[patch_idx] != key).any(axis=1)
        outer_idx = patch_idx[outer]

        improved = []
        improved.append(
            push_update(pts, dist, pred, outer_idx, cell_idx, point_cells, debug, counters)
        )
        improved.append(
            push_update(pts, dist, pred, cell_idx, cell_idx, point_cells, debug, counters)
        )
        improved.append(
            approx_push_update(
                pts,
                dist,
                pred,
                cell_idx,
                outer_idx,
                eps,
                cell=key,
                use_simulated_floor=use_simulated_floor,
                debug=debug,
                counters=counters,
            )
        )
        for arr in improved:
            for i in arr:
                if not removed[i]:
                    heapq.heappush(heap, (dist[i], int(i)))
        removed[cell_idx] = True
        if debug:  # chain sums must survive every update batch
            _check_consistency(pts, dist, pred, subset=patch_idx)

    if debug:
        _check_consistency(pts, dist, pred)
    return SsspResult(rebase_distances(ps.points, dist, pred, src), pred)
