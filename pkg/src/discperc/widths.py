"""Widths of occupied and vacant crossings.

The vacant width is exact: a horizontal vacant corridor of clearance
radius rho exists iff no chain of radius-rho discs crosses vertically,
so the widest corridor has clearance r* (the vertical bottleneck
radius) and the vacant width is 2*max(r* - 1, 0).

No such identity exists for the occupied width, which is measured on a
grid: rasterize coverage, take the Euclidean distance to the vacant set
at each node, and run a maximin widest-path across the square.  Grid
values are exact at nodes, so the only error is path discretization,
bounded by the field's Lipschitz constant times the node spacing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from . import _kernels
from .crossing_engine import (CensoringError, CrossingQuery, _build_hash,
                              bottleneck_radius, effective_margin,
                              occupied_crossing)
from .sampler import PointSample, Rect, square

# cells below this go through heap Dijkstra; above, the sort-and-union
# sweep wins on memory traffic
_DIJKSTRA_MAX_CELLS = 2_000_000

# raster margin (units) beyond the query square for occupied fields;
# depths at or above it are truncated by the raster edge
_FIELD_PAD = 3.0


@dataclass(frozen=True)
class ScalarField:
    """Values on a square grid: values[ix, iy] sits at (x0 + ix*h, y0 + iy*h)."""

    values: np.ndarray
    x0: float
    y0: float
    h: float

    def __post_init__(self) -> None:
        v = self.values
        if v.ndim != 2:
            raise ValueError("field values must be 2-D")
        if self.h <= 0:
            raise ValueError("pitch must be positive")

    @property
    def nx(self) -> int:
        return self.values.shape[0]

    @property
    def ny(self) -> int:
        return self.values.shape[1]

    def node_x(self) -> np.ndarray:
        return self.x0 + self.h * np.arange(self.nx)

    def node_y(self) -> np.ndarray:
        return self.y0 + self.h * np.arange(self.ny)

    def crop(self, cells: int) -> "ScalarField":
        """Drop `cells` rows/columns from every edge."""
        if cells == 0:
            return self
        if 2 * cells >= min(self.nx, self.ny):
            raise ValueError("crop exceeds field size")
        return ScalarField(
            values=self.values[cells:-cells, cells:-cells],
            x0=self.x0 + cells * self.h, y0=self.y0 + cells * self.h,
            h=self.h)


@dataclass(frozen=True)
class WidthResult:
    """A crossing width plus how far to trust it.

    error_bound is the deterministic numerical error (0 for exact
    routines).  censored means the truthful value may exceed what the
    sampling window or raster extent can certify; width is then a lower
    bound.
    """

    width: float
    censored: bool = False
    error_bound: float = 0.0


def default_pitch(n: float) -> float:
    """Grid pitch: 0.05 at desk scales, coarser past n=20 to cap cell counts."""
    return min(0.05, n / 400.0)


def grid_error_bound(h: float) -> float:
    """Width error of the grid maximin: two Lipschitz-1 path discretizations."""
    return 2.0 * math.sqrt(2.0) * h


def vacant_width(sample: PointSample, n: float) -> WidthResult:
    """Exact width of the widest horizontal vacant crossing of [-n,n]**2.

    Equals 2*(r* - 1) for r* the vertical occupied bottleneck radius
    when that exceeds 1, else 0 (the occupied set blocks every vacant
    corridor).  Infinite for an empty sample.
    """
    res = bottleneck_radius(sample, square(n), "vertical")
    if math.isinf(res.r_star):
        return WidthResult(width=math.inf, censored=res.censored)
    w = 2.0 * max(res.r_star - 1.0, 0.0)
    # censoring kicks in only when the corridor radius outruns the window
    return WidthResult(width=w, censored=res.censored)


def occupied_width_lower(sample: PointSample, n: float,
                         tol: float = 1e-9) -> WidthResult:
    """Certified lower bound on the widest occupied crossing of [-n,n]**2.

    If discs shrunk to radius r still cross a rectangle widened by
    sqrt(1-r**2) horizontally and trimmed to |y| <= n-1, each link of
    the chain carries a corridor of half-width sqrt(1-r**2) inside the
    full discs, entirely within the square.  The indicator is monotone
    increasing in r, so bisection brackets the smallest such r.
    """
    def crosses(r: float) -> bool:
        ext = math.sqrt(max(1.0 - r * r, 0.0))
        rect = Rect(-(n + ext), n + ext, -(n - 1.0), n - 1.0)
        return occupied_crossing(sample, CrossingQuery(rect, "horizontal", r))

    if n <= 1.0:
        raise ValueError("square must have n > 1")
    if not crosses(1.0):
        return WidthResult(width=0.0)
    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= 0.0 or mid >= 1.0:
            break
        if crosses(mid):
            hi = mid
        else:
            lo = mid
    # hi is always on the true side of the bracket
    return WidthResult(width=2.0 * math.sqrt(max(1.0 - hi * hi, 0.0)))


def coverage_mask(sample: PointSample, rect: Rect, h: float) -> ScalarField:
    """Boolean grid, True at nodes covered by some unit disc."""
    nx = int(round(rect.width / h)) + 1
    ny = int(round(rect.height / h)) + 1
    mask = np.zeros(nx * ny, dtype=np.bool_)
    if sample.count:
        _kernels.stamp_coverage(mask, nx, ny, rect.x_min, rect.y_min, h,
                                np.ascontiguousarray(sample.centers[:, 0]),
                                np.ascontiguousarray(sample.centers[:, 1]),
                                1.0)
    return ScalarField(values=mask.reshape(nx, ny), x0=rect.x_min,
                       y0=rect.y_min, h=h)


def occupied_distance_field(sample: PointSample, rect: Rect,
                            h: float) -> ScalarField:
    """Distance to the vacant set at each node (0 where vacant).

    Exactness caveat: the distance is measured on the raster, so it
    carries O(h) error, and depths exceeding the distance to the raster
    edge are truncated.  Callers pad the rect accordingly.
    """
    mask = coverage_mask(sample, rect, h)
    dist = ndimage.distance_transform_edt(mask.values, sampling=h)
    return ScalarField(values=dist, x0=mask.x0, y0=mask.y0, h=h)


def vacant_distance(x, sample: PointSample) -> float:
    """Distance from point x to the occupied set: max(0, min_i |x-c_i| - 1)."""
    if sample.count == 0:
        return math.inf
    d = np.hypot(sample.centers[:, 0] - float(x[0]),
                 sample.centers[:, 1] - float(x[1]))
    return float(max(d.min() - 1.0, 0.0))


def vacant_distance_field(sample: PointSample, rect: Rect,
                          h: float) -> ScalarField:
    """Exact distance to the occupied set at each node."""
    nx = int(round(rect.width / h)) + 1
    ny = int(round(rect.height / h)) + 1
    if sample.count == 0:
        vals = np.full((nx, ny), np.inf)
        return ScalarField(values=vals, x0=rect.x_min, y0=rect.y_min, h=h)
    hsh = _build_hash(sample.centers, sample.region, 1.0)
    d = _kernels.nearest_center_dist(nx, ny, rect.x_min, rect.y_min, h,
                                     hsh.xs, hsh.ys, hsh.starts,
                                     hsh.ncx, hsh.ncy, hsh.cell,
                                     hsh.hx0, hsh.hy0)
    vals = np.maximum(d - 1.0, 0.0).reshape(nx, ny)
    return ScalarField(values=vals, x0=rect.x_min, y0=rect.y_min, h=h)


def widest_path(field: ScalarField, orientation: str = "horizontal") -> float:
    """Maximin node value over 8-connected paths joining opposite sides.

    Small grids go through a best-first search; large ones through a
    descending-threshold union sweep.  The two are exactly equivalent
    (both compute the same maximin), the split is purely for speed.
    """
    if orientation not in ("horizontal", "vertical"):
        raise ValueError("orientation must be horizontal or vertical")
    axis = 0 if orientation == "horizontal" else 1
    vals = np.ascontiguousarray(field.values.reshape(-1), dtype=np.float64)
    nx, ny = field.nx, field.ny
    if vals.size <= _DIJKSTRA_MAX_CELLS:
        return float(_kernels.dijkstra_maximin(vals, nx, ny, axis))
    order = np.argsort(vals, kind="stable")[::-1].astype(np.int64)
    return float(_kernels.maximin_desc_union(order, vals, nx, ny, axis))


def occupied_width(sample: PointSample, n: float,
                   h: float | None = None) -> WidthResult:
    """Grid estimate of the widest occupied horizontal crossing of [-n,n]**2.

    The distance field is rasterized on the square padded by 3 units so
    interior depths are not clipped, then the maximin runs on the nodes
    of the square itself.  When the maximin reaches the truncation zone
    the result is censored (true width at least the reported value);
    otherwise the only error is the O(h) discretization bound.
    """
    if h is None:
        h = default_pitch(n)
    if effective_margin(sample, square(n)) < _FIELD_PAD + 1.0 - 1e-12:
        raise CensoringError(
            f"occupied width at n={n} needs a sampling margin of at least "
            f"{_FIELD_PAD + 1.0} around the square")
    pad_cells = int(math.ceil(_FIELD_PAD / h))
    pad = pad_cells * h
    rect = Rect(-n - pad, n + pad, -n - pad, n + pad)
    field = occupied_distance_field(sample, rect, h)
    inner = field.crop(pad_cells)
    v = widest_path(inner, "horizontal")
    censored = v >= pad - math.sqrt(2.0) * h
    return WidthResult(width=2.0 * v, censored=censored,
                       error_bound=grid_error_bound(h))


def vacant_width_grid(sample: PointSample, n: float,
                      h: float | None = None) -> WidthResult:
    """Grid twin of vacant_width, for cross-validation against the exact route."""
    if h is None:
        h = default_pitch(n)
    field = vacant_distance_field(sample, square(n), h)
    v = widest_path(field, "horizontal")
    if math.isinf(v):
        return WidthResult(width=math.inf, censored=True)
    return WidthResult(width=2.0 * v, censored=False,
                       error_bound=grid_error_bound(h))
