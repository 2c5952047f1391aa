"""Upper boundary of a union of unit disks clipped to a halfplane.

All disks have radius 1 and centers inside a single grid cell lying on
or below a horizontal *baseline* ``y = y0``; the halfplane of interest
is ``y >= y0``.  The visible boundary of the clipped union is an
x-monotone curve: a horizontal ray at ``y0`` on each end and, in
between, circular arc pieces — at most one piece per disk, ordered left
to right exactly like the disk centers.  :class:`Envelope` maintains
that piece sequence under disk insertion; each insertion binary-searches
the curve for the two points where the new circle crosses it, splices in
the new arc and reports the pieces it swallowed.

:func:`first_cover` builds on this to answer, for a batch of query
points and an ordered list of disk centers in one cell, the earliest
center whose disk contains each query.  Queries inside the cell are
covered by the very first disk (the cell diameter is below 1); the rest
are assigned to one of the four bounding halfplanes of the cell, rotated
into the canonical "above a horizontal baseline" frame, and resolved by
divide and conquer on the insertion order: a query covered by the
envelope of the first half of the centers recurses left, otherwise
right.  Tiny center lists use a direct scan instead.
"""
from __future__ import annotations

import bisect
import math
from typing import NamedTuple

import numpy as np

from .geom import GAMMA, PATCH_OFFSETS

_XTOL = 1e-12  # pieces narrower than this are treated as empty
_FC_BASE = 8  # first-cover scans directly below this many centers

_HERE, _LEFT, _RIGHT, _NONE = 0, 1, 2, 3


class _Piece:
    __slots__ = ("tag", "cx", "cy", "lo", "hi")

    def __init__(self, tag, cx, cy, lo, hi):
        self.tag = tag
        self.cx = cx
        self.cy = cy
        self.lo = lo
        self.hi = hi


class AddResult(NamedTuple):
    """Outcome of one effective disk insertion."""

    left: tuple[float, float]  # left endpoint of the new piece
    right: tuple[float, float]
    replaced: tuple[int, ...]  # tags of pieces removed outright


def _upper_crossing(x1, y1, x2, y2):
    """The intersection of two unit circles that lies on both upper arcs.

    Of the two circle intersections the one with larger y is the only
    candidate above both centers, hence the only possible crossing of
    the upper arcs.
    """
    dx = x2 - x1
    dy = y2 - y1
    d2 = dx * dx + dy * dy
    h2 = 1.0 - 0.25 * d2
    if h2 < 0.0:
        h2 = 0.0
    f = math.sqrt(h2 / d2)
    mx = 0.5 * (x1 + x2)
    my = 0.5 * (y1 + y2)
    ox = -dy * f
    oy = dx * f
    if oy >= 0.0:
        return mx + ox, my + oy
    return mx - ox, my - oy


class Envelope:
    """x-monotone boundary of a growing union of unit disks above a line.

    Pieces are kept in a flat x-sorted sequence; the bracketing
    horizontal rays at ``y0`` are implicit.  ``pieces_created`` counts
    every piece created or reshaped (new arcs plus truncations of cut
    neighbors), which stays linear in the number of insertions.
    """

    def __init__(self, baseline_y: float):
        self.y0 = float(baseline_y)
        self._pieces: list[_Piece] = []
        self.pieces_created = 0
        self.pieces_removed = 0

    def __len__(self) -> int:
        return len(self._pieces)

    @property
    def pieces(self) -> list[tuple[int, float, float, float, float]]:
        """(tag, cx, cy, lo, hi) per piece, left to right."""
        return [(p.tag, p.cx, p.cy, p.lo, p.hi) for p in self._pieces]

    def _arc_y(self, p: _Piece, x: float) -> float:
        t = 1.0 - (x - p.cx) ** 2
        return p.cy + math.sqrt(t if t > 0.0 else 0.0)

    # -- insertion ---------------------------------------------------------

    def add_disk(self, center, tag: int) -> AddResult | None:
        """Insert the unit disk about ``center``; None if nothing shows.

        The center must lie on or below the baseline.  Returns the new
        piece's endpoints and the tags of fully swallowed pieces.
        """
        cx, cy = float(center[0]), float(center[1])
        if cy > self.y0:
            raise ValueError("disk center lies strictly inside the halfplane")
        dy = self.y0 - cy
        if dy >= 1.0:
            return None  # disk never reaches the baseline
        h = math.sqrt(1.0 - dy * dy)
        xl = cx - h
        xr = cx + h
        pieces = self._pieces
        if not pieces:
            pieces.append(_Piece(tag, cx, cy, xl, xr))
            self.pieces_created += 1
            return AddResult((xl, self.y0), (xr, self.y0), ())

        left = self._search(cx, cy, xl, want_left=True)
        if left is None:
            return None
        right = self._search(cx, cy, xr, want_left=False)
        if right is None:
            return None
        lkind, lidx, lx, ly = left
        rkind, ridx, rx, ry = right

        t = len(pieces)
        if lkind == "arc":
            piece = pieces[lidx]
            if lx - piece.lo <= _XTOL:
                rm_start = lidx  # left cut reduced to a sliver: absorb it
                trunc_left = None
            else:
                rm_start = lidx + 1
                trunc_left = lx
        else:
            rm_start = 0
            trunc_left = None
        if rkind == "arc":
            piece = pieces[ridx]
            if piece.hi - rx <= _XTOL:
                rm_end = ridx + 1
                trunc_right = None
            else:
                rm_end = ridx
                trunc_right = rx
        else:
            rm_end = t
            trunc_right = None

        if rm_start > rm_end or rx - lx <= _XTOL:
            return None  # degenerate splice: the disk adds nothing visible

        replaced = tuple(p.tag for p in pieces[rm_start:rm_end])
        if trunc_left is not None:
            pieces[lidx].hi = trunc_left
            self.pieces_created += 1
        if trunc_right is not None:
            pieces[ridx].lo = trunc_right
            self.pieces_created += 1
        pieces[rm_start:rm_end] = [_Piece(tag, cx, cy, lx, rx)]
        self.pieces_created += 1
        self.pieces_removed += len(replaced)
        return AddResult((lx, ly), (rx, ry), replaced)

    def _search(self, cx, cy, x_extreme, want_left: bool):
        """Locate one endpoint of the would-be new piece.

        Binary search over the piece sequence plus the two virtual rays.
        Classification of a piece against the new disk needs only its
        two endpoints: an endpoint inside the disk pins the crossing to
        one side or onto the piece, and a piece with both endpoints
        outside is disjoint from the disk entirely (same-cell unit
        disks), so the relative order of the centers decides the
        direction.  Returns (kind, index, x, y) or None.
        """
        pieces = self._pieces
        t = len(pieces)
        lo, hi = -1, t
        while lo <= hi:
            mid = (lo + hi) // 2
            kind, payload = self._classify(mid, cx, cy, x_extreme, want_left)
            if kind == _HERE:
                return payload
            if kind == _LEFT:
                hi = mid - 1
            elif kind == _RIGHT:
                lo = mid + 1
            else:
                return None
        return None

    def _in_disk(self, px, py, cx, cy) -> bool:
        # strict: a boundary touch never raises the envelope
        dx = px - cx
        dy = py - cy
        return dx * dx + dy * dy < 1.0

    def _classify(self, i, cx, cy, x_extreme, want_left):
        pieces = self._pieces
        t = len(pieces)
        if i == -1:  # left baseline ray; its right endpoint starts piece 0
            first = pieces[0]
            if want_left:
                if self._in_disk(first.lo, self._arc_y(first, first.lo), cx, cy):
                    return _HERE, ("ray", -1, x_extreme, self.y0)
                return _RIGHT, None
            return _RIGHT, None
        if i == t:  # right baseline ray; its left endpoint ends the last piece
            last = pieces[-1]
            if want_left:
                return _LEFT, None
            if self._in_disk(last.hi, self._arc_y(last, last.hi), cx, cy):
                return _HERE, ("ray", t, x_extreme, self.y0)
            return _LEFT, None
        p = pieces[i]
        if cx == p.cx and cy == p.cy:
            return _NONE, None  # the disk is already on the envelope
        pl_in = self._in_disk(p.lo, self._arc_y(p, p.lo), cx, cy)
        pr_in = self._in_disk(p.hi, self._arc_y(p, p.hi), cx, cy)
        if want_left:
            if pl_in:
                return _LEFT, None
            if pr_in:
                x, y = _upper_crossing(cx, cy, p.cx, p.cy)
                x = min(max(x, p.lo), p.hi)
                return _HERE, ("arc", i, x, y)
        else:
            if pr_in:
                return _RIGHT, None
            if pl_in:
                x, y = _upper_crossing(cx, cy, p.cx, p.cy)
                x = min(max(x, p.lo), p.hi)
                return _HERE, ("arc", i, x, y)
        # piece disjoint from the new disk: steer by center order
        if cx < p.cx:
            return _LEFT, None
        if cx > p.cx:
            return _RIGHT, None
        return _NONE, None  # same column, disjoint: the new arc is dominated

    # -- membership ---------------------------------------------------------

    def covers(self, p) -> bool:
        """Whether ``p`` lies in the clipped disk union (on-boundary counts).

        ``p`` must be in the halfplane.  A shared piece endpoint belongs
        to the piece on its left; the baseline rays are not disk
        material, so points out there are uncovered.
        """
        x, y = float(p[0]), float(p[1])
        if y < self.y0:
            raise ValueError("query point lies outside the halfplane")
        pieces = self._pieces
        if not pieces:
            return False
        i = bisect.bisect_left(pieces, x, key=lambda pc: pc.lo) - 1
        if i < 0:
            return False
        piece = pieces[i]
        if x > piece.hi:
            return False
        return y <= self._arc_y(piece, x)


# -- first cover -------------------------------------------------------------


def _halfplane_first_cover(tu, tv, base, vpos, res, offset):
    """Earliest covering center per query, centers and queries pre-rotated."""
    k = tu.shape[0]
    if tv.shape[0] == 0:
        return
    if k <= _FC_BASE:
        dx = tu[:, 0][:, None] - tv[:, 0][None, :]
        dy = tu[:, 1][:, None] - tv[:, 1][None, :]
        cov = dx * dx + dy * dy <= 1.0
        hit = cov.any(axis=0)
        first = np.argmax(cov, axis=0)
        res[vpos[hit]] = offset + first[hit]
        return
    mid = k // 2
    env = Envelope(base)
    for i in range(mid):
        env.add_disk((tu[i, 0], tu[i, 1]), i)
    covered = np.fromiter(
        (env.covers((tv[j, 0], tv[j, 1])) for j in range(tv.shape[0])),
        dtype=bool,
        count=tv.shape[0],
    )
    _halfplane_first_cover(tu[:mid], tv[covered], base, vpos[covered], res, offset)
    _halfplane_first_cover(
        tu[mid:], tv[~covered], base, vpos[~covered], res, offset + mid
    )


def first_cover(
    u_points, v_points, cell: tuple[int, int] | None = None, side: float = GAMMA
) -> np.ndarray:
    """Position in ``u_points`` of the first disk covering each query.

    ``u_points`` (already sorted by the caller's key) must lie in one
    half-open grid cell of the given side, which must not exceed
    ``1/sqrt(2)`` so that the whole cell fits in one unit disk.  Returns
    an int array with -1 for queries no disk covers.  Coincident centers
    are answered by their earliest occurrence.
    """
    u = np.asarray(u_points, dtype=np.float64).reshape(-1, 2)
    v = np.asarray(v_points, dtype=np.float64).reshape(-1, 2)
    k, q = u.shape[0], v.shape[0]
    out = np.full(q, -1, dtype=np.int64)
    if k == 0 or q == 0:
        return out
    if side * math.sqrt(2.0) > 1.0:
        raise ValueError("cell side too large for the one-disk-covers-cell rule")
    if cell is None:
        col = math.floor(u[0, 0] / side)
        row = math.floor(u[0, 1] / side)
    else:
        col, row = int(cell[0]), int(cell[1])
    x0 = col * side
    y0 = row * side
    x1 = x0 + side
    y1 = y0 + side
    if not (
        (u[:, 0] >= x0).all()
        and (u[:, 0] < x1).all()
        and (u[:, 1] >= y0).all()
        and (u[:, 1] < y1).all()
    ):
        raise ValueError("all centers must lie in the same grid cell")

    if k <= _FC_BASE:
        # tiny center lists: one direct sweep beats the halfplane split
        dx = u[:, 0][:, None] - v[:, 0][None, :]
        dy = u[:, 1][:, None] - v[:, 1][None, :]
        cov = dx * dx + dy * dy <= 1.0
        hit = cov.any(axis=0)
        out[hit] = np.argmax(cov[:, hit], axis=0)
        return out

    # drop coincident duplicates, keeping the earliest occurrence
    seen: dict[tuple[float, float], int] = {}
    keep: list[int] = []
    for i in range(k):
        key = (u[i, 0], u[i, 1])
        if key not in seen:
            seen[key] = len(keep)
            keep.append(i)
    keep_arr = np.asarray(keep, dtype=np.int64)
    du = u[keep_arr]

    res = np.full(q, -1, dtype=np.int64)  # positions into the deduped list
    vx = v[:, 0]
    vy = v[:, 1]
    in_cell = (vx >= x0) & (vx < x1) & (vy >= y0) & (vy < y1)
    res[in_cell] = 0  # the cell sits inside the first disk
    rest = ~in_cell
    top = rest & (vy >= y1)
    bottom = rest & ~top & (vy < y0)
    leftp = rest & ~top & ~bottom & (vx < x0)
    rightp = rest & ~top & ~bottom & ~leftp

    for mask, mode in ((top, "top"), (bottom, "bottom"), (leftp, "left"), (rightp, "right")):
        vpos = np.flatnonzero(mask)
        if vpos.size == 0:
            continue
        sv = v[vpos]
        if mode == "top":
            tu, tv, base = du, sv, y1
        elif mode == "bottom":
            tu, tv, base = -du, -sv, -y0
        elif mode == "left":
            tu = np.column_stack((du[:, 1], -du[:, 0]))
            tv = np.column_stack((sv[:, 1], -sv[:, 0]))
            base = -x0
        else:
            tu = np.column_stack((-du[:, 1], du[:, 0]))
            tv = np.column_stack((-sv[:, 1], sv[:, 0]))
            base = x1
        _halfplane_first_cover(
            np.ascontiguousarray(tu), np.ascontiguousarray(tv), base, vpos, res, 0
        )

    hit = res >= 0
    out[hit] = keep_arr[res[hit]]
    return out


def first_cover_multicell(
    u_points,
    v_points,
    side: float = GAMMA,
    u_cells: np.ndarray | None = None,
    v_cells: np.ndarray | None = None,
) -> np.ndarray:
    """First-cover positions when the centers may span several cells.

    Centers are grouped per cell (keeping the global order), one
    single-cell solver is run per group, and each query consults only
    the groups inside its own 5x5 patch — disks from farther cells
    cannot reach it.  Returns global positions into ``u_points``.
    """
    u = np.asarray(u_points, dtype=np.float64).reshape(-1, 2)
    v = np.asarray(v_points, dtype=np.float64).reshape(-1, 2)
    k, q = u.shape[0], v.shape[0]
    out = np.full(q, -1, dtype=np.int64)
    if k == 0 or q == 0:
        return out
    if u_cells is None:
        u_cells = np.floor(u / side).astype(np.int64)
    groups: dict[tuple[int, int], list[int]] = {}
    for i in range(k):
        groups.setdefault((int(u_cells[i, 0]), int(u_cells[i, 1])), []).append(i)
    if len(groups) == 1:
        (key,) = groups
        return first_cover(u, v, cell=key, side=side)
    if v_cells is None:
        v_cells = np.floor(v / side).astype(np.int64)
    queries: dict[tuple[int, int], list[int]] = {key: [] for key in groups}
    for j in range(q):
        vc, vr = int(v_cells[j, 0]), int(v_cells[j, 1])
        for dc, dr in PATCH_OFFSETS:
            key = (vc + dc, vr + dr)
            if key in queries:
                queries[key].append(j)
    for key, upos_list in groups.items():
        vq = queries[key]
        if not vq:
            continue
        upos = np.asarray(upos_list, dtype=np.int64)
        sub = first_cover(u[upos], v[vq], cell=key, side=side)
        for j, r in zip(vq, sub):
            if r >= 0:
                cand = upos[r]
                if out[j] < 0 or cand < out[j]:
                    out[j] = cand
    return out
