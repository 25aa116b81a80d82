"""Pivotal points, four-arm events, and the derivative formula.

A point is pivotal for a crossing when adding a disc there flips the
indicator.  Around a pivotal site four alternating arms (occupied,
vacant, occupied, vacant) must radiate outward, which ties the density
of pivotal sites to the four-arm probability and, through it, to the
near-critical window.  The derivative of the crossing probability in
the intensity equals the expected area of the pivotal set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy import ndimage
from scipy.spatial import cKDTree

from .crossing_engine import CrossingQuery, occupied_crossing
from .sampler import PointSample, Rect, rng_for, sample_for_query, square

# 8-connectivity for occupied labels, 4 for vacant: the grid analogue of
# closed discs versus open complement, so the two labelings cannot both
# connect across each other
_STRUCT8 = np.ones((3, 3), dtype=bool)
_STRUCT4 = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=bool)


@dataclass(frozen=True)
class ArmQuery:
    """Closed annulus r <= |x - center| <= R."""

    r: float
    R: float
    center: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self) -> None:
        if not (0 < self.r <= self.R):
            raise ValueError("need 0 < r <= R")


@dataclass(frozen=True)
class Pi4Estimate:
    value: float
    stderr: float
    n_samples: int
    method: str


def with_extra_center(sample: PointSample, x) -> PointSample:
    """The same configuration plus one disc centered at x."""
    extra = np.asarray(x, dtype=np.float64).reshape(1, 2)
    if not sample.region.contains(float(extra[0, 0]), float(extra[0, 1])):
        raise ValueError("extra center must lie inside the sampling window")
    centers = np.vstack([sample.centers, extra]) if sample.count \
        else extra.copy()
    return replace(sample, centers=centers)


def is_pivotal(sample: PointSample, rect: Rect, x,
               orientation: str = "horizontal", radius: float = 1.0) -> bool:
    """Does adding a disc at x flip the crossing indicator?

    Adding a disc is monotone, so this reduces to: no crossing without
    it, crossing with it.
    """
    query = CrossingQuery(rect, orientation, radius)
    if occupied_crossing(sample, query):
        return False
    return occupied_crossing(with_extra_center(sample, x), query)


def _occupied_arm_possible(sample: PointSample, ann: ArmQuery) -> bool:
    """Cheap necessary condition: an overlap chain from the inner disc to
    radius R, ignoring the annulus restriction.  False rules out A4."""
    cx, cy = ann.center
    d = np.hypot(sample.centers[:, 0] - cx, sample.centers[:, 1] - cy)
    near = d <= ann.r + 1.0
    far = d >= ann.R - 1.0
    if not (near.any() and far.any()):
        return False
    if (near & far).any():
        return True
    keep = d <= ann.R + 1.0
    idx = np.nonzero(keep)[0]
    pts = sample.centers[idx]
    tree = cKDTree(pts)
    pairs = tree.query_pairs(2.0, output_type="ndarray")
    parent = np.arange(idx.size)

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a, b in pairs:
        ra, rb = find(int(a)), find(int(b))
        if ra != rb:
            parent[ra] = rb
    near_roots = {find(int(i)) for i in np.nonzero(near[idx])[0]}
    far_roots = {find(int(i)) for i in np.nonzero(far[idx])[0]}
    return bool(near_roots & far_roots)


def four_arm_annulus(sample: PointSample, ann: ArmQuery,
                     pitch: float | None = None) -> bool:
    """Four alternating arms crossing the annulus, decided on a raster.

    Occupied components use 8-connectivity and vacant 4-connectivity so
    the discrete arms cannot cross each other.  A walk just inside the
    inner circle collects the cyclic order of components that reach the
    outer circle; the event holds when two distinct occupied and two
    distinct vacant such components interleave.  Degenerate annuli
    (r == R) count as true.  Raster resolution trades accuracy for
    speed; this is an estimator component, not an exact decision.
    """
    if ann.r == ann.R:
        return True
    if sample.count == 0:
        return False
    if not _occupied_arm_possible(sample, ann):
        return False
    if pitch is None:
        pitch = max(min(0.08, ann.r / 12.0), 2.0 * ann.R / 2400.0)
    cx, cy = ann.center
    nx = 2 * int(math.ceil(ann.R / pitch)) + 1
    x0 = cx - (nx // 2) * pitch
    y0 = cy - (nx // 2) * pitch

    gx = x0 + pitch * np.arange(nx)
    gy = y0 + pitch * np.arange(nx)
    dist = np.hypot(gx[:, None] - cx, gy[None, :] - cy)
    in_ann = (dist >= ann.r) & (dist <= ann.R)

    keep = np.hypot(sample.centers[:, 0] - cx,
                    sample.centers[:, 1] - cy) <= ann.R + 1.0
    pts = sample.centers[keep]
    occ = np.zeros((nx, nx), dtype=bool)
    if pts.shape[0]:
        tree = cKDTree(pts)
        xs = np.repeat(gx, nx)
        ys = np.tile(gy, nx)
        dd, _ = tree.query(np.stack([xs, ys], axis=1), k=1)
        occ = (dd.reshape(nx, nx) <= 1.0)

    occ_lab, _ = ndimage.label(occ & in_ann, structure=_STRUCT8)
    vac_lab, _ = ndimage.label(~occ & in_ann, structure=_STRUCT4)

    # which components reach the outer rim
    rim = in_ann & (dist >= ann.R - 1.5 * pitch)
    long_occ = set(np.unique(occ_lab[rim])) - {0}
    long_vac = set(np.unique(vac_lab[rim])) - {0}
    if len(long_occ) < 2 or len(long_vac) < 2:
        return False

    # cyclic word of long components along a circle just inside the hole
    rw = ann.r + 1.5 * pitch
    n_theta = max(int(2.0 * math.pi * rw / pitch) * 2, 64)
    theta = np.linspace(0.0, 2.0 * math.pi, n_theta, endpoint=False)
    wx = np.clip(((cx + rw * np.cos(theta)) - x0) / pitch, 0, nx - 1)
    wy = np.clip(((cy + rw * np.sin(theta)) - y0) / pitch, 0, nx - 1)
    ix = np.rint(wx).astype(np.int64)
    iy = np.rint(wy).astype(np.int64)
    word: list[tuple[int, int]] = []
    for a, b in zip(ix, iy):
        o = occ_lab[a, b]
        v = vac_lab[a, b]
        if o and o in long_occ:
            tok = (1, int(o))
        elif v and v in long_vac:
            tok = (0, int(v))
        else:
            continue
        if not word or word[-1] != tok:
            word.append(tok)
    if len(word) > 1 and word[0] == word[-1]:
        word.pop()
    if len(word) < 4:
        return False

    # look for occupied a .. vacant b .. occupied c .. vacant d cyclically,
    # with a != c and b != d
    L = len(word)
    for i in range(L):
        ti, ci = word[i]
        if ti != 1:
            continue
        for j in range(i + 1, i + L):
            tj, cj = word[j % L]
            if tj != 0:
                continue
            for k in range(j + 1, i + L):
                tk, ck = word[k % L]
                if tk != 1 or ck == ci:
                    continue
                for l in range(k + 1, i + L):
                    tl, cl = word[l % L]
                    if tl == 0 and cl != cj:
                        return True
    return False


def estimate_pi4(intensity: float, n: float, samples: int,
                 method: str = "pivotal", seed: int = 0,
                 stream: int = 3) -> Pi4Estimate:
    """Monte Carlo four-arm probability at scale n.

    pivotal: fraction of configurations where the origin is pivotal for
    the horizontal crossing of [-n,n]**2; the four arms then radiate
    from the origin to the sides.  annulus: direct raster decision of
    the four-arm event in the annulus 1 <= |x| <= n.
    """
    if method not in ("pivotal", "annulus"):
        raise ValueError("method must be pivotal or annulus")
    sq = square(n)
    hits = 0
    for i in range(samples):
        s = sample_for_query(sq, intensity, seed, index=i, margin=4.0,
                             stream=stream)
        if method == "pivotal":
            hits += is_pivotal(s, sq, (0.0, 0.0))
        else:
            hits += four_arm_annulus(s, ArmQuery(1.0, n))
    p = hits / samples
    se = math.sqrt(max(p * (1.0 - p), 1.0 / samples)) / math.sqrt(samples)
    return Pi4Estimate(value=p, stderr=se, n_samples=samples, method=method)


def alpha_n(pi4: Pi4Estimate | float, n: float) -> float:
    """Near-critical window scale: 1 / (pi4 * n^2)."""
    p = pi4.value if isinstance(pi4, Pi4Estimate) else float(pi4)
    if p <= 0:
        return math.inf
    return 1.0 / (p * n * n)


def russo_check(intensity: float, n: float, d_lambda: float, samples: int,
                seed: int = 0) -> tuple[float, float, float]:
    """Compare dP[cross]/dlambda with the expected pivotal area.

    Left side: centered finite difference of the crossing probability.
    Right side: |B| * P[X pivotal] with X uniform on the square dilated
    by one unit, which covers every location where an added disc could
    matter.  Returns (lhs, rhs, z) with z the distance in pooled
    standard errors.
    """
    sq = square(n)

    def cross_prob(lam: float, stream: int) -> tuple[float, float]:
        hits = 0
        for i in range(samples):
            s = sample_for_query(sq, lam, seed, index=i, margin=4.0,
                                 stream=stream)
            hits += occupied_crossing(s, CrossingQuery(sq))
        p = hits / samples
        return p, math.sqrt(p * (1.0 - p) / samples)

    p_hi, se_hi = cross_prob(intensity + d_lambda, stream=11)
    p_lo, se_lo = cross_prob(intensity - d_lambda, stream=12)
    lhs = (p_hi - p_lo) / (2.0 * d_lambda)
    se_lhs = math.sqrt(se_hi ** 2 + se_lo ** 2) / (2.0 * d_lambda)

    box = sq.dilated(1.0)
    area = box.area
    hits = 0
    for i in range(samples):
        s = sample_for_query(sq, intensity, seed, index=i, margin=4.0,
                             stream=13)
        u = rng_for(seed, index=i, stream=14).random(2)
        x = (box.x_min + u[0] * box.width, box.y_min + u[1] * box.height)
        hits += is_pivotal(s, sq, x)
    q = hits / samples
    rhs = area * q
    se_rhs = area * math.sqrt(max(q * (1.0 - q), 1.0 / samples) / samples)

    z = abs(lhs - rhs) / math.hypot(se_lhs, se_rhs)
    return lhs, rhs, z
