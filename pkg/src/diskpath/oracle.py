"""Ground truth: explicit graph construction, Dijkstra, result validation.

The oracle is deliberately plain — build the unit-disk graph edge list
and run textbook Dijkstra over it — so solver bugs cannot hide in shared
machinery.  It does share one thing with the solvers by design: the edge
predicate ``squared distance <= 1`` and the distance expression
``sqrt(dx*dx + dy*dy)``, so both sides agree on the graph bit for bit.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

import numpy as np

from .geom import PATCH_OFFSETS, PointSet
from .result import NO_PRED, SsspResult

_BLOCK = 256  # row block size for the pairwise-distance sweeps


@dataclass
class ExplicitGraph:
    """Adjacency in compressed sparse rows; weights are edge lengths."""

    n: int
    indptr: np.ndarray
    indices: np.ndarray
    weights: np.ndarray

    def neighbors(self, i: int) -> tuple[np.ndarray, np.ndarray]:
        a, b = self.indptr[i], self.indptr[i + 1]
        return self.indices[a:b], self.weights[a:b]

    @property
    def edge_count(self) -> int:
        """Number of undirected edges."""
        return int(self.indices.size) // 2


def build_explicit_graph(ps: PointSet, force_naive: bool = False) -> ExplicitGraph:
    """All unit-distance edges of the point set.

    Uses grid bucketing to keep the pairwise sweep local; ``force_naive``
    compares every pair instead, for tests that want the enumeration
    independent of the grid machinery.
    """
    pts = ps.points
    n = pts.shape[0]
    src_parts: list[np.ndarray] = []
    dst_parts: list[np.ndarray] = []
    w_parts: list[np.ndarray] = []

    def sweep(rows: np.ndarray, cand: np.ndarray):
        for a in range(0, rows.size, _BLOCK):
            block = rows[a : a + _BLOCK]
            dx = pts[block, 0][:, None] - pts[cand, 0][None, :]
            dy = pts[block, 1][:, None] - pts[cand, 1][None, :]
            d2 = dx * dx + dy * dy
            hit = (d2 <= 1.0) & (block[:, None] != cand[None, :])
            bi, ci = np.nonzero(hit)
            if bi.size:
                src_parts.append(block[bi])
                dst_parts.append(cand[ci])
                w_parts.append(np.sqrt(d2[bi, ci]))

    if force_naive:
        sweep(np.arange(n), np.arange(n))
    else:
        cells: dict[tuple[int, int], list[int]] = {}
        cols = np.floor(pts / 0.5).astype(np.int64)
        for i in range(n):
            cells.setdefault((int(cols[i, 0]), int(cols[i, 1])), []).append(i)
        cell_arrays = {k: np.asarray(v, dtype=np.int64) for k, v in cells.items()}
        for (col, row), members in cell_arrays.items():
            cand = [
                cell_arrays[(col + dc, row + dr)]
                for dc, dr in PATCH_OFFSETS
                if (col + dc, row + dr) in cell_arrays
            ]
            sweep(members, np.concatenate(cand))

    if src_parts:
        src = np.concatenate(src_parts)
        dst = np.concatenate(dst_parts)
        w = np.concatenate(w_parts)
    else:
        src = dst = np.empty(0, dtype=np.int64)
        w = np.empty(0)
    counts = np.bincount(src, minlength=n)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    order = np.argsort(src, kind="stable")
    return ExplicitGraph(n, indptr, dst[order].astype(np.int64), w[order])


def dijkstra_baseline(g: ExplicitGraph, source: int) -> SsspResult:
    """Textbook Dijkstra with a lazy binary heap; ties pop smallest index."""
    if not 0 <= source < g.n:
        raise ValueError(f"source index {source} out of range")
    dist = np.full(g.n, np.inf)
    pred = np.full(g.n, NO_PRED, dtype=np.int64)
    done = np.zeros(g.n, dtype=bool)
    dist[source] = 0.0
    heap: list[tuple[float, int]] = [(0.0, source)]
    while heap:
        d, u = heapq.heappop(heap)
        if done[u] or d != dist[u]:
            continue
        done[u] = True
        a, b = g.indptr[u], g.indptr[u + 1]
        nbrs = g.indices[a:b]
        nd = d + g.weights[a:b]
        better = nd < dist[nbrs]
        targets = nbrs[better]
        vals = nd[better]
        dist[targets] = vals
        pred[targets] = u
        for t, v in zip(targets.tolist(), vals.tolist()):
            heapq.heappush(heap, (v, t))
    return SsspResult(dist, pred)


@dataclass
class ValidationReport:
    """Structured outcome of :func:`validate`; empty failures means pass."""

    failures: list[tuple[int, str, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def add(self, index: int, code: str, message: str):
        self.failures.append((index, code, message))

    def summary(self, limit: int = 20) -> str:
        if self.ok:
            return "ok"
        lines = [f"{len(self.failures)} failure(s)"]
        for index, code, message in self.failures[:limit]:
            lines.append(f"  vertex {index}: {code}: {message}")
        if len(self.failures) > limit:
            lines.append(f"  ... and {len(self.failures) - limit} more")
        return "\n".join(lines)


def _rel_close(a: float, b: float, tol: float) -> bool:
    if a == b:  # covers inf == inf and exact zeros
        return True
    if math.isinf(a) or math.isinf(b):
        return False
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def validate(
    res: SsspResult,
    ps: PointSet,
    eps: float | None = None,
    reference: SsspResult | None = None,
    tol: float = 1e-9,
) -> ValidationReport:
    """Check a result's internal invariants and, optionally, a reference.

    Internal checks: source at distance 0 with no predecessor, every
    predecessor edge within unit distance, chain lengths consistent
    (``dist[a] == dist[pred[a]] + edge`` within ``tol`` relative), and
    infinite distance exactly for non-source points without predecessor.
    With a reference: exact mode (``eps=None``) demands equality within
    ``tol`` relative; approximate mode demands
    ``reference <= dist <= (1+eps)*reference`` with ``tol`` slack on both
    sides.  Returns a report, never raises on bad data.
    """
    report = ValidationReport()
    pts = ps.points
    n = pts.shape[0]
    dist, pred = res.dist, res.pred
    if dist.shape[0] != n:
        report.add(-1, "shape", f"result has {dist.shape[0]} entries for {n} points")
        return report

    s = ps.source
    if dist[s] != 0.0:
        report.add(s, "source-dist", f"dist[source] = {dist[s]!r}, expected 0.0")
    if pred[s] != NO_PRED:
        report.add(s, "source-pred", "source must have no predecessor")

    for a in range(n):
        p = pred[a]
        if a == s:
            continue
        if p == NO_PRED:
            if math.isfinite(dist[a]):
                report.add(a, "orphan", "finite distance but no predecessor")
            continue
        if not math.isfinite(dist[a]):
            report.add(a, "ghost", "infinite distance but a predecessor is set")
            continue
        if not 0 <= p < n:
            report.add(a, "pred-range", f"predecessor {p} out of range")
            continue
        dx = pts[p, 0] - pts[a, 0]
        dy = pts[p, 1] - pts[a, 1]
        if dx * dx + dy * dy > 1.0:
            report.add(a, "pred-edge", "pred edge exceeds unit distance")
        want = dist[p] + math.sqrt(dx * dx + dy * dy)
        if not _rel_close(float(dist[a]), float(want), tol):
            report.add(a, "pred-sum", f"dist {dist[a]!r} != dist[pred]+edge {want!r}")

    if reference is not None:
        ref = reference.dist
        for a in range(n):
            da, ra = float(dist[a]), float(ref[a])
            if eps is None:
                if not _rel_close(da, ra, tol):
                    report.add(a, "mismatch", f"dist {da!r} vs reference {ra!r}")
                continue
            if math.isinf(ra) != math.isinf(da):
                report.add(a, "reach", f"dist {da!r} vs reference {ra!r}")
                continue
            if math.isinf(ra):
                continue
            slack = tol * max(1.0, ra)
            if da < ra - slack:
                report.add(a, "underestimate", f"dist {da!r} below reference {ra!r}")
            if da > (1.0 + eps) * ra + slack:
                report.add(
                    a, "overshoot", f"dist {da!r} above (1+eps)*reference = {(1.0 + eps) * ra!r}"
                )
    return report
