"""Additively weighted nearest-neighbor search.

A *site* is a planar point carrying a nonnegative weight (possibly
``inf``).  The cost of site ``p`` for a query ``q`` is
``weight(p) + ||p - q||`` and a query returns the site of minimum cost.
Every implementation here — the linear-scan reference
(:func:`wnn_brute`), the static structure (:class:`StaticWnn`) and the
offline insert/query solver (:func:`offline_solve`) — computes distances
with the same expression and breaks cost ties toward the smallest site
tag, so their answers agree exactly and can be cross-checked bit for
bit.

Infinite-weight sites are legal everywhere and simply never win; they
are dropped at build/insert time, so ``inf + x`` is never formed.

``offline_solve`` handles a known sequence of insertions and queries,
each query answered against the sites inserted strictly before it.  The
sequence is split so each half holds half of the insertions, both halves
are solved recursively, and answers of second-half queries are combined
with a static query over the first-half sites; with ``m`` insertions and
``n`` operations total this costs O(n log^2 m).
"""
from __future__ import annotations

import heapq
import math
from typing import NamedTuple, Sequence

import numpy as np

_BASE_INSERTIONS = 8  # recursion base: replay directly below this many insertions
_AUTO_TREE_SITES = 4096  # "auto" builds the spatial tree above this site count
_LEAF_SIZE = 16


class WeightedSite(NamedTuple):
    x: float
    y: float
    weight: float
    tag: int


class Insert(NamedTuple):
    site: WeightedSite


class Query(NamedTuple):
    point: tuple[float, float]
    qid: int


def wnn_brute(sites: Sequence[WeightedSite], q) -> tuple[int, float] | None:
    """Reference linear scan: (tag, cost) of the best finite site, or None."""
    qx, qy = float(q[0]), float(q[1])
    best_val = math.inf
    best_tag = -1
    for s in sites:
        w = s.weight
        if w == math.inf:
            continue
        dx = s.x - qx
        dy = s.y - qy
        val = w + math.sqrt(dx * dx + dy * dy)
        if val < best_val or (val == best_val and s.tag < best_tag):
            best_val = val
            best_tag = s.tag
    if best_tag < 0:
        return None
    return best_tag, best_val


class StaticWnn:
    """Weighted nearest-neighbor structure over a fixed site list.

    Two interchangeable realizations sit behind the same query contract:

    * ``"brute"`` — vectorized scan over all sites.  Sites are kept in
      ascending tag order so the first argmin is the smallest tag.
    * ``"tree"`` — a median-split spatial tree storing per-subtree
      minimum weight (and minimum tag); queries run best-first with the
      lower bound ``min_weight + dist(q, bounding box)``, which never
      exceeds the cost of any site in the subtree, so pruning is exact.

    ``"auto"`` picks brute for small site counts and the tree above
    ``_AUTO_TREE_SITES``.  Infinite-weight sites are dropped at build
    time; a structure holding no finite site answers None everywhere.
    """

    def __init__(self, sites: Sequence[WeightedSite], method: str = "auto"):
        xs = np.array([s[0] for s in sites], dtype=np.float64)
        ys = np.array([s[1] for s in sites], dtype=np.float64)
        ws = np.array([s[2] for s in sites], dtype=np.float64)
        tags = np.array([s[3] for s in sites], dtype=np.int64)
        self._init_from_arrays(xs, ys, ws, tags, method)

    @classmethod
    def from_arrays(cls, xs, ys, ws, tags, method: str = "auto") -> "StaticWnn":
        self = cls.__new__(cls)
        self._init_from_arrays(
            np.asarray(xs, dtype=np.float64),
            np.asarray(ys, dtype=np.float64),
            np.asarray(ws, dtype=np.float64),
            np.asarray(tags, dtype=np.int64),
            method,
        )
        return self

    def _init_from_arrays(self, xs, ys, ws, tags, method):
        finite = np.isfinite(ws)
        if not finite.all():
            xs, ys, ws, tags = xs[finite], ys[finite], ws[finite], tags[finite]
        order = np.argsort(tags, kind="stable")
        self._x = xs[order]
        self._y = ys[order]
        self._w = ws[order]
        self._tags = tags[order]
        self._m = int(self._x.size)
        if method == "auto":
            method = "tree" if self._m > _AUTO_TREE_SITES else "brute"
        if method not in ("brute", "tree"):
            raise ValueError(f"unknown method {method!r}")
        self.method = method
        if method == "tree" and self._m:
            self._build_tree()

    def __len__(self) -> int:
        return self._m

    # -- tree realization ------------------------------------------------

    def _build_tree(self):
        m = self._m
        perm = np.arange(m)
        x, y = self._x, self._y
        # node fields, appended as nodes are created
        self._nlo = []  # (x0, y0)
        self._nhi = []  # (x1, y1)
        self._nminw = []
        self._nmintag = []
        self._nchild = []  # (left, right) or (-1, start) encoding a leaf range
        self._nleafend = []

        def build(idx: np.ndarray) -> int:
            nid = len(self._nminw)
            bx = x[idx]
            by = y[idx]
            self._nlo.append((bx.min(), by.min()))
            self._nhi.append((bx.max(), by.max()))
            self._nminw.append(self._w[idx].min())
            self._nmintag.append(int(self._tags[idx].min()))
            self._nchild.append((-1, -1))
            self._nleafend.append(None)
            if idx.size <= _LEAF_SIZE:
                self._nleafend[nid] = idx
                return nid
            spanx = self._nhi[nid][0] - self._nlo[nid][0]
            spany = self._nhi[nid][1] - self._nlo[nid][1]
            vals = bx if spanx >= spany else by
            half = idx.size // 2
            part = np.argpartition(vals, half)
            left = build(idx[part[:half]])
            right = build(idx[part[half:]])
            self._nchild[nid] = (left, right)
            return nid

        build(perm)
        # plain lists give fast scalar access in the query loop
        self._lx = self._x.tolist()
        self._ly = self._y.tolist()
        self._lw = self._w.tolist()
        self._ltags = self._tags.tolist()

    def _bbox_lb(self, nid: int, qx: float, qy: float) -> float:
        x0, y0 = self._nlo[nid]
        x1, y1 = self._nhi[nid]
        dx = x0 - qx
        if dx < 0.0:
            dx = qx - x1
            if dx < 0.0:
                dx = 0.0
        dy = y0 - qy
        if dy < 0.0:
            dy = qy - y1
            if dy < 0.0:
                dy = 0.0
        return self._nminw[nid] + math.sqrt(dx * dx + dy * dy)

    def _query_tree(self, qx: float, qy: float) -> tuple[int, float]:
        best_val = math.inf
        best_tag = -1
        heap = [(self._bbox_lb(0, qx, qy), self._nmintag[0], 0)]
        lx, ly, lw, ltags = self._lx, self._ly, self._lw, self._ltags
        while heap:
            lb, mtag, nid = heapq.heappop(heap)
            if lb > best_val or (lb == best_val and mtag > best_tag >= 0):
                break  # heap is (lb, mtag)-ordered: nothing better remains
            leaf = self._nleafend[nid]
            if leaf is not None:
                for i in leaf:
                    dx = lx[i] - qx
                    dy = ly[i] - qy
                    val = lw[i] + math.sqrt(dx * dx + dy * dy)
                    t = ltags[i]
                    if val < best_val or (val == best_val and t < best_tag):
                        best_val = val
                        best_tag = t
            else:
                for child in self._nchild[nid]:
                    clb = self._bbox_lb(child, qx, qy)
                    if clb < best_val or (clb == best_val and self._nmintag[child] < best_tag):
                        heapq.heappush(heap, (clb, self._nmintag[child], child))
        return best_tag, best_val

    # -- shared query surface ---------------------------------------------

    def query(self, q) -> tuple[int, float] | None:
        """(tag, cost) of the minimum-cost site for q; None when empty."""
        if self._m == 0:
            return None
        qx, qy = float(q[0]), float(q[1])
        if self.method == "tree":
            tag, val = self._query_tree(qx, qy)
            return (int(tag), float(val))
        dx = self._x - qx
        dy = self._y - qy
        vals = self._w + np.sqrt(dx * dx + dy * dy)
        i = int(np.argmin(vals))  # first minimum == smallest tag
        return int(self._tags[i]), float(vals[i])

    def query_batch(self, pts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Vectorized queries: arrays of tags (-1 for none) and costs (inf)."""
        pts = np.asarray(pts, dtype=np.float64).reshape(-1, 2)
        k = pts.shape[0]
        tags = np.full(k, -1, dtype=np.int64)
        vals = np.full(k, np.inf)
        if self._m == 0 or k == 0:
            return tags, vals
        if self.method == "tree":
            for j in range(k):
                t, v = self._query_tree(pts[j, 0], pts[j, 1])
                tags[j] = t
                vals[j] = v
            return tags, vals
        # chunk the (sites x queries) cost matrix to bound memory
        chunk = max(1, (1 << 22) // max(1, self._m))
        for a in range(0, k, chunk):
            b = min(k, a + chunk)
            dx = self._x[:, None] - pts[a:b, 0][None, :]
            dy = self._y[:, None] - pts[a:b, 1][None, :]
            cost = self._w[:, None] + np.sqrt(dx * dx + dy * dy)
            arg = np.argmin(cost, axis=0)
            tags[a:b] = self._tags[arg]
            vals[a:b] = cost[arg, np.arange(b - a)]
        return tags, vals


def _better(val, tag, best_val, best_tag) -> bool:
    return val < best_val or (val == best_val and tag < best_tag)


def offline_solve(ops: Sequence[Insert | Query]) -> dict[int, tuple[int, float] | None]:
    """Answer every query of an insert/query sequence in one offline pass.

    Each query sees exactly the sites inserted before it.  Raises
    ValueError on duplicate query ids.
    """
    n_ops = len(ops)
    is_ins = np.empty(n_ops, dtype=bool)
    xs = np.empty(n_ops)
    ys = np.empty(n_ops)
    ws = np.empty(n_ops)
    ids = np.empty(n_ops, dtype=np.int64)  # site tag or query id
    for i, op in enumerate(ops):
        if isinstance(op, Insert):
            s = op.site
            is_ins[i] = True
            xs[i], ys[i], ws[i], ids[i] = s.x, s.y, s.weight, s.tag
        elif isinstance(op, Query):
            is_ins[i] = False
            xs[i], ys[i] = float(op.point[0]), float(op.point[1])
            ws[i] = 0.0
            ids[i] = op.qid
        else:
            raise TypeError(f"operation {i} is neither Insert nor Query")

    ins_pos = np.flatnonzero(is_ins)
    q_pos = np.flatnonzero(~is_ins)
    qids = ids[q_pos]
    if np.unique(qids).size != qids.size:
        raise ValueError("duplicate query ids in operation sequence")

    answers: dict[int, tuple[int, float] | None] = {}

    def solve(op_lo: int, op_hi: int, ins_lo: int, ins_hi: int):
        m = ins_hi - ins_lo
        if m <= _BASE_INSERTIONS:
            sites: list[tuple[float, float, float, int]] = []
            for i in range(op_lo, op_hi):
                if is_ins[i]:
                    if ws[i] != math.inf:
                        sites.append((xs[i], ys[i], ws[i], int(ids[i])))
                    continue
                qx, qy = xs[i], ys[i]
                best_val = math.inf
                best_tag = -1
                for sx, sy, sw, st in sites:
                    dx = sx - qx
                    dy = sy - qy
                    val = sw + math.sqrt(dx * dx + dy * dy)
                    if val < best_val or (val == best_val and st < best_tag):
                        best_val = val
                        best_tag = st
                answers[int(ids[i])] = None if best_tag < 0 else (best_tag, best_val)
            return
        mid = ins_lo + (m + 1) // 2  # first half takes the extra insertion
        split = int(ins_pos[mid - 1]) + 1
        solve(op_lo, split, ins_lo, mid)
        solve(split, op_hi, mid, ins_hi)
        first = ins_pos[ins_lo:mid]
        static = StaticWnn.from_arrays(xs[first], ys[first], ws[first], ids[first])
        if len(static) == 0:
            return
        a = int(np.searchsorted(q_pos, split))
        b = int(np.searchsorted(q_pos, op_hi))
        right_q = q_pos[a:b]
        if right_q.size == 0:
            return
        tags, vals = static.query_batch(np.column_stack((xs[right_q], ys[right_q])))
        for j, qp in enumerate(right_q):
            if tags[j] < 0:
                continue
            qid = int(ids[qp])
            cur = answers[qid]
            if cur is None or _better(vals[j], tags[j], cur[1], cur[0]):
                answers[qid] = (int(tags[j]), float(vals[j]))

    if n_ops:
        solve(0, n_ops, 0, int(ins_pos.size))
    return answers
