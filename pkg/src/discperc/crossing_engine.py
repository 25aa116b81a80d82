"""Exact crossing decisions and bottleneck radii for unions of discs.

A disc clipped to the query rectangle is convex, hence connected, so the
occupied set crosses the rectangle iff the graph on clipped discs (edges:
activation radius <= r) plus two virtual side nodes connects the sides.
The bottleneck radius r* is the minimax activation over side-to-side
chains, computed by a Kruskal sweep over lazily gathered edges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .sampler import PointSample, Rect

ORIENTATIONS = ("horizontal", "vertical")

# numerical slack for the sampling-window sufficiency check only; all
# geometric comparisons against the radius itself are exact
_EPS = 1e-12


class CensoringError(RuntimeError):
    """The sampling window cannot certify the requested query."""


@dataclass(frozen=True)
class CrossingQuery:
    """Rectangle + orientation + disc radius: the unit of crossing decisions."""

    rect: Rect
    orientation: str = "horizontal"
    radius: float = 1.0

    def __post_init__(self) -> None:
        if self.orientation not in ORIENTATIONS:
            raise ValueError(f"orientation must be one of {ORIENTATIONS}")
        if not (np.isfinite(self.radius) and self.radius > 0):
            raise ValueError(f"radius must be positive, got {self.radius}")

    @property
    def axis(self) -> int:
        return 0 if self.orientation == "horizontal" else 1


@dataclass(frozen=True)
class BottleneckResult:
    """Minimal radius at which an occupied crossing first exists.

    witness lists the center indices of a chain whose activation radii
    are all <= r_star (empty when r_star is infinite); censored means
    r_star exceeds the radius the sampling margin can certify, so centers
    outside the window could lower (never raise) the answer.
    """

    r_star: float
    witness: list[int]
    censored: bool


def activation_radius(c1, c2, rect: Rect) -> float:
    """Smallest r such that B(c1,r) and B(c2,r) meet inside rect.

    min over x in rect of max(|x-c1|, |x-c2|): the half-distance when the
    midpoint lies in rect, otherwise the exact minimum of that convex
    function over the four boundary edges (candidates: perpendicular
    feet, the equidistant point, segment endpoints).
    """
    return float(_kernels._activation(
        float(c1[0]), float(c1[1]), float(c2[0]), float(c2[1]),
        rect.x_min, rect.x_max, rect.y_min, rect.y_max))


def boundary_activation(c, side) -> float:
    """Euclidean distance from center c to one side segment ((ax,ay),(bx,by))."""
    (ax, ay), (bx, by) = side
    return math.sqrt(_kernels._seg_point_d2(
        float(c[0]), float(c[1]),
        float(ax), float(ay), float(bx), float(by)))


def side_segments(rect: Rect, orientation: str):
    """The two sides joined by a crossing of the given orientation."""
    if orientation == "horizontal":
        return (((rect.x_min, rect.y_min), (rect.x_min, rect.y_max)),
                ((rect.x_max, rect.y_min), (rect.x_max, rect.y_max)))
    return (((rect.x_min, rect.y_min), (rect.x_max, rect.y_min)),
            ((rect.x_min, rect.y_max), (rect.x_max, rect.y_max)))


def effective_margin(sample: PointSample, rect: Rect) -> float:
    """Smallest gap between the query rect and the sampling window edge."""
    reg = sample.region
    return min(rect.x_min - reg.x_min, reg.x_max - rect.x_max,
               rect.y_min - reg.y_min, reg.y_max - rect.y_max)


@dataclass(frozen=True)
class _Hash:
    xs: np.ndarray
    ys: np.ndarray
    starts: np.ndarray
    ncx: int
    ncy: int
    cell: float
    hx0: float
    hy0: float
    order: np.ndarray


def _build_hash(centers: np.ndarray, region: Rect, min_cell: float) -> _Hash:
    """Sort centers into a CSR cell grid over the sampling window.

    Cell size is at least min_cell (2x the largest radius probed through
    this hash) but widened on sparse samples so occupancy stays near one
    point per cell.
    """
    m = centers.shape[0]
    w = region.width
    h = region.height
    density_cell = 0.7 * math.sqrt(w * h / max(m, 1))
    cell = max(min_cell, density_cell)
    ncx = int(w / cell) + 1
    ncy = int(h / cell) + 1
    ix = np.clip(np.floor((centers[:, 0] - region.x_min) / cell).astype(np.int64),
                 0, ncx - 1)
    iy = np.clip(np.floor((centers[:, 1] - region.y_min) / cell).astype(np.int64),
                 0, ncy - 1)
    keys = ix * ncy + iy
    order = np.argsort(keys, kind="stable")
    counts = np.bincount(keys, minlength=ncx * ncy)
    starts = np.zeros(ncx * ncy + 1, dtype=np.int64)
    np.cumsum(counts, out=starts[1:])
    return _Hash(xs=np.ascontiguousarray(centers[order, 0]),
                 ys=np.ascontiguousarray(centers[order, 1]),
                 starts=starts, ncx=ncx, ncy=ncy, cell=cell,
                 hx0=region.x_min, hy0=region.y_min, order=order)


def _check_window(sample: PointSample, rect: Rect, radius: float) -> None:
    eff = effective_margin(sample, rect)
    if eff < radius - _EPS:
        raise CensoringError(
            f"sampling window extends only {eff:.6g} beyond the query "
            f"rectangle; radius {radius:.6g} requires margin >= {radius:.6g}")


def occupied_crossing(sample: PointSample, query: CrossingQuery,
                      _hash: _Hash | None = None) -> bool:
    """Exact decision: does the radius-r occupied set cross the rectangle?

    Raises CensoringError when the sampling window is narrower than the
    disc radius, since discs centered outside the window could then reach
    the rectangle.  Tangent discs count as connected (closed discs).
    """
    _check_window(sample, query.rect, query.radius)
    if sample.count == 0:
        return False
    hsh = _hash if _hash is not None else _build_hash(
        sample.centers, sample.region, 2.0 * query.radius)
    if hsh.cell < 2.0 * query.radius - _EPS:
        raise ValueError("hash cell too small for the queried radius")
    rect = query.rect
    return bool(_kernels.crossing_kernel(
        hsh.xs, hsh.ys, hsh.starts, hsh.ncx, hsh.ncy, hsh.cell,
        hsh.hx0, hsh.hy0, float(query.radius),
        rect.x_min, rect.x_max, rect.y_min, rect.y_max, query.axis))


def vacant_crossing(sample: PointSample, rect: Rect,
                    orientation: str = "horizontal") -> bool:
    """Does the vacant set (complement of unit discs) cross the rectangle?

    By planar duality this holds iff the occupied set does not cross in
    the transposed orientation; boundary coincidences are measure zero
    and resolved in favor of the occupied event.
    """
    if orientation not in ORIENTATIONS:
        raise ValueError(f"orientation must be one of {ORIENTATIONS}")
    transposed = "vertical" if orientation == "horizontal" else "horizontal"
    return not occupied_crossing(sample, CrossingQuery(rect, transposed, 1.0))


def _side_distances(centers: np.ndarray, rect: Rect, orientation: str):
    sides = side_segments(rect, orientation)
    out = []
    for (a, b) in sides:
        ax, ay = a
        bx, by = b
        if ax == bx:
            dx = centers[:, 0] - ax
            dy = np.clip(ay - centers[:, 1], 0, None) + \
                np.clip(centers[:, 1] - by, 0, None)
        else:
            dx = centers[:, 1] - ay
            dy = np.clip(ax - centers[:, 0], 0, None) + \
                np.clip(centers[:, 0] - bx, 0, None)
        out.append(np.sqrt(dx * dx + dy * dy))
    return out


def bottleneck_radius(sample: PointSample, rect: Rect,
                      orientation: str = "horizontal") -> BottleneckResult:
    """Minimax activation radius over side-to-side chains of centers.

    Edges are gathered lazily: the candidate radius cap doubles until the
    Kruskal sweep connects the sides.  Any radius found under the cap is
    exact because every edge of weight <= cap was on the table.  With at
    least one center a chain side -> center -> side always exists, so the
    sweep terminates; an empty sample yields r_star = +inf.
    """
    if orientation not in ORIENTATIONS:
        raise ValueError(f"orientation must be one of {ORIENTATIONS}")
    eff = effective_margin(sample, rect)
    m = sample.count
    if m == 0:
        return BottleneckResult(r_star=math.inf, witness=[], censored=True)

    d_lo, d_hi = _side_distances(sample.centers, rect, orientation)
    single_bound = float(np.min(np.maximum(d_lo, d_hi)))

    cap = min(1.25, single_bound) if single_bound > 0 else single_bound
    while True:
        hsh = _build_hash(sample.centers, sample.region, 2.0 * cap)
        empty_i = np.empty(0, np.int64)
        empty_w = np.empty(0, np.float64)
        cnt = _kernels.pair_edges(
            hsh.xs, hsh.ys, hsh.starts, hsh.ncx, hsh.ncy, hsh.cell,
            hsh.hx0, hsh.hy0, cap, rect.x_min, rect.x_max,
            rect.y_min, rect.y_max, empty_i, empty_i, empty_w, True)
        ei = np.empty(cnt, np.int64)
        ej = np.empty(cnt, np.int64)
        ew = np.empty(cnt, np.float64)
        _kernels.pair_edges(
            hsh.xs, hsh.ys, hsh.starts, hsh.ncx, hsh.ncy, hsh.cell,
            hsh.hx0, hsh.hy0, cap, rect.x_min, rect.x_max,
            rect.y_min, rect.y_max, ei, ej, ew, False)

        # side distances in hash order, filtered to the cap
        lo_s = d_lo[hsh.order]
        hi_s = d_hi[hsh.order]
        il = np.nonzero(lo_s <= cap)[0]
        ir = np.nonzero(hi_s <= cap)[0]
        ei_all = np.concatenate([ei, il, ir])
        ej_all = np.concatenate([ej,
                                 np.full(il.shape[0], m, dtype=np.int64),
                                 np.full(ir.shape[0], m + 1, dtype=np.int64)])
        ew_all = np.concatenate([ew, lo_s[il], hi_s[ir]])
        edge_order = np.argsort(ew_all, kind="stable")

        r_star, used = _kernels.kruskal_bottleneck(edge_order, ei_all,
                                                   ej_all, ew_all, m)
        if np.isfinite(r_star):
            witness = _extract_witness(used, ei_all, ej_all, m, hsh.order)
            return BottleneckResult(r_star=float(r_star), witness=witness,
                                    censored=bool(r_star > eff))
        if cap >= single_bound:
            # unreachable: the single-center chain is present at this cap
            return BottleneckResult(r_star=math.inf, witness=[],
                                    censored=True)
        cap = min(2.0 * cap, single_bound)


def _extract_witness(used: np.ndarray, ei: np.ndarray, ej: np.ndarray,
                     m: int, order: np.ndarray) -> list[int]:
    """Side-to-side path through the Kruskal forest, as original indices."""
    adj: dict[int, list[int]] = {}
    for k in used:
        a, b = int(ei[k]), int(ej[k])
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    left, right = m, m + 1
    prev = {left: left}
    queue = [left]
    while queue:
        nxt = []
        for u in queue:
            for v in adj.get(u, ()):
                if v not in prev:
                    prev[v] = u
                    nxt.append(v)
        if right in prev:
            break
        queue = nxt
    if right not in prev:
        return []
    path = []
    node = prev[right]
    while node != left:
        path.append(node)
        node = prev[node]
    path.reverse()
    return [int(order[p]) for p in path]
