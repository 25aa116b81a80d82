"""Monte Carlo experiments over the disc model.

Every estimator here is deterministic given (seed, parameters): sample i
of an experiment always comes from the Philox substream (seed, stream,
i), so results replay bit-identically regardless of worker count or
batch order.  Standard errors are binomial for probabilities and
batch-bootstrap (batches of 100) for derived quantities.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .arms import alpha_n, estimate_pi4
from .crossing_engine import CrossingQuery, bottleneck_radius, occupied_crossing
from .sampler import Rect, rng_for, sample_for_query, square
from .widths import default_pitch, occupied_width

BOOTSTRAP_BATCH = 100
_BOOTSTRAP_REPS = 200

# stream ids per experiment family, so estimates that must be independent
# never share a substream
_STREAM_CROSS = 1
_STREAM_WIDTH = 2
_STREAM_COUPLING_A = 5
_STREAM_COUPLING_B = 6
_STREAM_CHARLEN = 7
_STREAM_WINDOW = 8
_STREAM_FKG = 9
_STREAM_RRR = 10


class CurveCrossingError(ValueError):
    """The two crossing-probability curves do not intersect on the grid."""


@dataclass(frozen=True)
class EstimateRecord:
    """One estimated quantity, carrying everything needed to replay it."""

    experiment: str
    lam: float
    n: float
    quantity: str
    value: float
    stderr: float
    n_samples: int
    seed: int
    params: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.stderr < 0:
            raise ValueError("stderr must be nonnegative")

    def params_json(self) -> str:
        return json.dumps(self.params, sort_keys=True, separators=(",", ":"))


@dataclass(frozen=True)
class SweepResult:
    records: list[EstimateRecord]
    fitted_slope: float | None = None
    slope_stderr: float | None = None


def _binom_se(p: float, n: int) -> float:
    return math.sqrt(max(p * (1.0 - p), 0.0) / n)


# === crossing probabilities =============================================

def _count_crossings(intensity: float, rect: Rect, orientation: str,
                     radius: float, seed: int, stream: int,
                     start: int, stop: int, margin: float) -> int:
    query = CrossingQuery(rect, orientation, radius)
    hits = 0
    for i in range(start, stop):
        s = sample_for_query(rect, intensity, seed, index=i, margin=margin,
                             stream=stream)
        hits += occupied_crossing(s, query)
    return hits


def _shard_ranges(samples: int, shards: int) -> list[tuple[int, int]]:
    step = (samples + shards - 1) // shards
    return [(a, min(a + step, samples)) for a in range(0, samples, step)]


def crossing_counts(intensity: float, rect: Rect, orientation: str = "horizontal",
                    radius: float = 1.0, samples: int = 1000, seed: int = 0,
                    stream: int = _STREAM_CROSS, threads: int = 1,
                    margin: float = 4.0) -> int:
    """Number of crossing samples out of `samples`; shardable over workers.

    Sample i always uses substream (seed, stream, i), so the count is
    identical for every thread count.
    """
    if threads <= 1:
        return _count_crossings(intensity, rect, orientation, radius, seed,
                                stream, 0, samples, margin)
    ranges = _shard_ranges(samples, threads)
    with ProcessPoolExecutor(max_workers=threads) as ex:
        futs = [ex.submit(_count_crossings, intensity, rect, orientation,
                          radius, seed, stream, a, b, margin)
                for a, b in ranges]
        return sum(f.result() for f in futs)


def crossing_probability(intensity: float, rect: Rect,
                         orientation: str = "horizontal", samples: int = 1000,
                         seed: int = 0, radius: float = 1.0, threads: int = 1,
                         margin: float = 4.0,
                         stream: int = _STREAM_CROSS) -> EstimateRecord:
    """Binomial estimate of the probability that discs cross the rectangle."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    hits = crossing_counts(intensity, rect, orientation, radius, samples,
                           seed, stream, threads, margin)
    p = hits / samples
    return EstimateRecord(
        experiment="cross-prob", lam=float(intensity),
        n=rect.height / 2.0, quantity="cross_prob", value=p,
        stderr=_binom_se(p, samples), n_samples=samples, seed=seed,
        params={"rect": [rect.x_min, rect.x_max, rect.y_min, rect.y_max],
                "orientation": orientation, "radius": radius,
                "margin": margin, "stream": stream})


# === critical intensity =================================================

def _monotone_increasing(y: np.ndarray) -> np.ndarray:
    """Pool-adjacent-violators projection onto nondecreasing sequences."""
    y = y.astype(np.float64).copy()
    w = np.ones_like(y)
    vals: list[float] = []
    wts: list[float] = []
    for yi, wi in zip(y, w):
        vals.append(float(yi))
        wts.append(float(wi))
        while len(vals) > 1 and vals[-2] > vals[-1]:
            v = (vals[-2] * wts[-2] + vals[-1] * wts[-1]) / (wts[-2] + wts[-1])
            wt = wts[-2] + wts[-1]
            vals = vals[:-2] + [v]
            wts = wts[:-2] + [wt]
    out = []
    for v, wt in zip(vals, wts):
        out.extend([v] * int(wt))
    return np.array(out)


def _first_sign_change(grid: np.ndarray, diff: np.ndarray) -> float:
    """Leftmost zero of the piecewise-linear diff going negative -> positive."""
    for k in range(len(grid) - 1):
        a, b = diff[k], diff[k + 1]
        if a < 0 <= b:
            if b == a:
                return float(grid[k + 1])
            t = -a / (b - a)
            return float(grid[k] + t * (grid[k + 1] - grid[k]))
    raise CurveCrossingError(
        "crossing-probability curves do not intersect on the grid")


DEFAULT_LAMBDA_GRID = tuple(round(0.33 + 0.005 * k, 3) for k in range(13))


def estimate_lambda_c(n_list, samples: int = 100_000, seed: int = 0,
                      lambda_grid=None, threads: int = 1,
                      stream: int = 20) -> EstimateRecord:
    """Critical intensity from the crossing point of two finite-size curves.

    The crossing probability sharpens with scale, so the curves for the
    two largest n in n_list pivot around the critical point; their
    intersection estimates it without assuming any particular critical
    crossing probability.  `samples` is the total per curve, split
    evenly over the lambda grid.  Each curve is monotonized (isotonic
    projection) before the piecewise-linear intersection; the standard
    error is a bootstrap over batches of 100 samples.
    """
    ns = sorted(float(v) for v in n_list)
    if len(ns) < 2:
        raise ValueError("need at least two scales")
    n_small, n_big = ns[-2], ns[-1]
    grid = np.array(DEFAULT_LAMBDA_GRID if lambda_grid is None
                    else sorted(lambda_grid))
    per_point = max(samples // len(grid), 1)

    def curve_hits(n: float, substream: int) -> np.ndarray:
        sq = square(n)
        return np.array([
            crossing_counts(lam, sq, samples=per_point, seed=seed,
                            stream=substream, threads=threads)
            for lam in grid], dtype=np.float64)

    hits_small = curve_hits(n_small, stream)
    hits_big = curve_hits(n_big, stream + 1)
    p_small = _monotone_increasing(hits_small / per_point)
    p_big = _monotone_increasing(hits_big / per_point)
    est = _first_sign_change(grid, p_big - p_small)

    # batch bootstrap: per grid point, resample the per-batch hit counts
    n_batches = max(per_point // BOOTSTRAP_BATCH, 1)
    rng = rng_for(seed, stream=63)
    boots = []
    for _ in range(_BOOTSTRAP_REPS):
        def resampled(hits: np.ndarray) -> np.ndarray:
            # batch means are exchangeable; binomial thinning per batch
            # reproduces the batch-resampling distribution without
            # storing per-batch counts
            out = np.empty_like(hits)
            for j, h in enumerate(hits):
                p_hat = h / per_point
                draws = rng.binomial(BOOTSTRAP_BATCH,
                                     min(max(p_hat, 0.0), 1.0), n_batches)
                out[j] = draws.mean() / BOOTSTRAP_BATCH
            return out
        try:
            boots.append(_first_sign_change(
                grid, _monotone_increasing(resampled(hits_big))
                - _monotone_increasing(resampled(hits_small))))
        except CurveCrossingError:
            continue
    se = float(np.std(boots)) if len(boots) >= 2 else math.nan

    return EstimateRecord(
        experiment="lambda-c", lam=est, n=n_big, quantity="lambda_c",
        value=est, stderr=se, n_samples=samples, seed=seed,
        params={"n_list": [n_small, n_big], "grid": [float(g) for g in grid],
                "per_point": per_point, "bootstrap_ok": len(boots),
                "stream": stream})


# === width distributions ================================================

def _vacant_width_values(intensity: float, n: float, samples: int, seed: int,
                         stream: int, margin: float,
                         start: int = 0) -> tuple[list[float], int, int]:
    """(accepted widths, censored count, attempts); width cap 2*(margin-1)."""
    sq = square(n)
    cap = 2.0 * (margin - 1.0)
    vals: list[float] = []
    censored = 0
    for i in range(start, start + samples):
        s = sample_for_query(sq, intensity, seed, index=i, margin=margin,
                             stream=stream)
        # crossing at radius 1 means zero vacant width: rejected, cheap test
        if s.count and occupied_crossing(s, CrossingQuery(sq, "vertical", 1.0)):
            continue
        res = bottleneck_radius(s, sq, "vertical")
        w = 2.0 * max(res.r_star - 1.0, 0.0)
        if res.censored or w > cap:
            vals.append(cap)
            censored += 1
        elif w > 0:
            vals.append(w)
    return vals, censored, samples


def _occupied_width_values(intensity: float, n: float, samples: int,
                           seed: int, stream: int, margin: float, h: float,
                           start: int = 0) -> tuple[list[float], int, int]:
    sq = square(n)
    vals: list[float] = []
    censored = 0
    for i in range(start, start + samples):
        s = sample_for_query(sq, intensity, seed, index=i, margin=margin,
                             stream=stream)
        if not occupied_crossing(s, CrossingQuery(sq, "horizontal", 1.0)):
            continue
        res = occupied_width(s, n, h)
        vals.append(res.width)
        censored += res.censored
    return vals, censored, samples


def _quantile_records(experiment: str, which: str, vals: list[float],
                      censored: int, intensity: float, n: float,
                      samples: int, seed: int, params: dict) -> list[EstimateRecord]:
    recs = []
    arr = np.array(vals, dtype=np.float64)
    rng = rng_for(seed, stream=62)
    for q in (10, 50, 90):
        if arr.size:
            v = float(np.quantile(arr, q / 100.0))
            if arr.size >= 10:
                idx = rng.integers(0, arr.size,
                                   size=(_BOOTSTRAP_REPS, arr.size))
                se = float(np.std(np.quantile(arr[idx], q / 100.0, axis=1)))
            else:
                se = math.nan
        else:
            v, se = math.nan, math.nan
        recs.append(EstimateRecord(
            experiment=experiment, lam=intensity, n=n,
            quantity=f"{which}_width_q{q}", value=v,
            stderr=se if not math.isnan(se) else 0.0,
            n_samples=samples, seed=seed,
            params={**params, "accepted": int(arr.size),
                    "censored": censored}))
    recs.append(EstimateRecord(
        experiment=experiment, lam=intensity, n=n,
        quantity=f"{which}_width_accepted", value=float(arr.size), stderr=0.0,
        n_samples=samples, seed=seed, params=params))
    recs.append(EstimateRecord(
        experiment=experiment, lam=intensity, n=n,
        quantity=f"{which}_width_censored", value=float(censored), stderr=0.0,
        n_samples=samples, seed=seed, params=params))
    return recs


def width_distribution(intensity: float, n: float, which: str = "vacant",
                       samples: int = 1000, seed: int = 0,
                       h: float | None = None, margin: float = 4.0,
                       threads: int = 1,
                       stream: int = _STREAM_WIDTH) -> SweepResult:
    """Conditional width quantiles (10/50/90%) at one scale.

    Conditioning on the crossing event is by rejection: samples whose
    width is zero are discarded (width > 0 is the crossing event).
    Vacant widths beyond what the sampling margin certifies are counted
    and right-censored at 2*(margin - 1).
    """
    if which not in ("occupied", "vacant"):
        raise ValueError("which must be occupied or vacant")
    if h is None:
        h = default_pitch(n)
    if threads <= 1:
        if which == "vacant":
            vals, censored, _ = _vacant_width_values(
                intensity, n, samples, seed, stream, margin)
        else:
            vals, censored, _ = _occupied_width_values(
                intensity, n, samples, seed, stream, margin, h)
    else:
        fn = _vacant_width_values if which == "vacant" \
            else _occupied_width_values
        extra = () if which == "vacant" else (h,)
        ranges = _shard_ranges(samples, threads)
        with ProcessPoolExecutor(max_workers=threads) as ex:
            futs = [ex.submit(fn, intensity, n, b - a, seed, stream, margin,
                              *extra, start=a) for a, b in ranges]
            parts = [f.result() for f in futs]
        vals = [v for p in parts for v in p[0]]
        censored = sum(p[1] for p in parts)
    params = {"which": which, "margin": margin, "stream": stream,
              "pitch": h if which == "occupied" else None}
    recs = _quantile_records("width-dist", which, vals, censored,
                             intensity, n, samples, seed, params)
    return SweepResult(records=recs)


# === coupling identities ================================================

def coupling_identity_check(intensity: float, a: float, n: float,
                            samples: int = 10_000,
                            seed: int = 0) -> tuple[float, float, float]:
    """Two routes to P[vacant width <= 2a], which must agree.

    Route one evaluates the event directly: the width is at most 2a iff
    discs enlarged to radius 1+a cross vertically.  Route two rescales
    space by 1+a, turning the enlarged discs back into unit discs on a
    smaller square with intensity lambda*(1+a)**2 (the pushforward of a
    Poisson process under x -> x/r multiplies the intensity by r**2).
    Returns (p1, p2, z) from two independent ensembles.
    """
    if a < 0:
        raise ValueError("a must be >= 0")
    sq = square(n)
    hits1 = 0
    q1 = CrossingQuery(sq, "vertical", 1.0 + a)
    for i in range(samples):
        s = sample_for_query(sq, intensity, seed, index=i,
                             margin=max(4.0, 1.0 + a + 0.5),
                             stream=_STREAM_COUPLING_A)
        hits1 += occupied_crossing(s, q1)
    p1 = hits1 / samples

    n2 = n / (1.0 + a)
    lam2 = intensity * (1.0 + a) ** 2
    sq2 = square(n2)
    hits2 = 0
    q2 = CrossingQuery(sq2, "vertical", 1.0)
    for i in range(samples):
        s = sample_for_query(sq2, lam2, seed, index=i, margin=4.0,
                             stream=_STREAM_COUPLING_B)
        hits2 += occupied_crossing(s, q2)
    p2 = hits2 / samples

    se = math.hypot(_binom_se(p1, samples), _binom_se(p2, samples))
    z = abs(p1 - p2) / se if se > 0 else (0.0 if p1 == p2 else math.inf)
    return p1, p2, z


def width_bound_check(intensity: float, a: float, n: float,
                      samples: int = 2000,
                      seed: int = 0) -> tuple[float, float, float]:
    """Occupied-width lower bound, checked through two exact routes.

    A chain of discs shrunk to radius sqrt(1-a**2) crossing the widened
    rectangle guarantees an occupied corridor of half-width a inside the
    unit discs, so P[w_n > 2a] is at least the shrunk-chain crossing
    probability.  p1 evaluates that crossing directly; p2 evaluates its
    rescaled twin (unit discs, intensity lambda*(1-a**2)).  Returns
    (p1, p2, signed z); the identity makes z mean-zero.
    """
    if not 0 <= a < 1:
        raise ValueError("need 0 <= a < 1")
    r = math.sqrt(1.0 - a * a)
    rect = Rect(-(n + a), n + a, -(n - 1.0), n - 1.0)
    hits1 = 0
    q1 = CrossingQuery(rect, "horizontal", r)
    for i in range(samples):
        s = sample_for_query(rect, intensity, seed, index=i, margin=4.0,
                             stream=_STREAM_COUPLING_A)
        hits1 += occupied_crossing(s, q1)
    p1 = hits1 / samples

    rect2 = rect.scaled(1.0 / r)
    lam2 = intensity * r * r
    hits2 = 0
    q2 = CrossingQuery(rect2, "horizontal", 1.0)
    for i in range(samples):
        s = sample_for_query(rect2, lam2, seed, index=i, margin=4.0,
                             stream=_STREAM_COUPLING_B)
        hits2 += occupied_crossing(s, q2)
    p2 = hits2 / samples

    se = math.hypot(_binom_se(p1, samples), _binom_se(p2, samples))
    z = (p1 - p2) / se if se > 0 else 0.0
    return p1, p2, z


# === characteristic length ==============================================

def characteristic_length(intensity: float, delta: float = 0.25,
                          n_max: float = 256.0, samples: int = 2000,
                          seed: int = 0) -> EstimateRecord:
    """Smallest doubling scale where one species crosses with P >= 1-delta.

    Off criticality exactly one of the two species comes to dominate;
    the sweep tracks both and stops at whichever wins first.  At
    intensity 0 the vacant branch wins at the first scale.  Returns +inf
    when neither species reaches 1-delta by n_max.
    """
    if not 0 < delta < 1:
        raise ValueError("delta must be in (0,1)")
    probs: dict[str, list] = {"n": [], "occupied": [], "vacant": []}
    n = 1.0
    found = math.inf
    while n <= n_max:
        sq = square(n)
        occ = 0
        vac = 0
        for i in range(samples):
            s = sample_for_query(sq, intensity, seed, index=i, margin=4.0,
                                 stream=_STREAM_CHARLEN)
            horiz = occupied_crossing(s, CrossingQuery(sq, "horizontal", 1.0))
            vert = occupied_crossing(s, CrossingQuery(sq, "vertical", 1.0))
            occ += horiz
            vac += not vert
        p_occ, p_vac = occ / samples, vac / samples
        probs["n"].append(n)
        probs["occupied"].append(p_occ)
        probs["vacant"].append(p_vac)
        if max(p_occ, p_vac) >= 1.0 - delta:
            found = n
            break
        n *= 2.0
    return EstimateRecord(
        experiment="char-length", lam=intensity, n=found,
        quantity="characteristic_length", value=found, stderr=0.0,
        n_samples=samples, seed=seed,
        params={"delta": delta, "n_max": n_max, "sweep": probs,
                "stream": _STREAM_CHARLEN})


# === near-critical window ===============================================

def near_critical_window_check(n: float, C_grid=(0.0, 0.5, 1.0, 2.0, 5.0,
                                                 10.0, 20.0, 50.0),
                               samples: int = 2000, seed: int = 0,
                               lambda_c: float = 0.3591,
                               alpha: float | None = None,
                               pi4_samples: int = 30_000) -> SweepResult:
    """Probe how fast crossing probabilities move away from criticality.

    Evaluates the hard-direction crossing of a 2:1 rectangle below
    criticality and the easy direction above, at intensities shifted by
    C * alpha_n steps, plus a stability probe at +-0.1 * alpha_n.
    alpha defaults to the measured pivotal density at this scale.
    """
    if alpha is None:
        pi4 = estimate_pi4(lambda_c, n, pi4_samples, method="pivotal",
                           seed=seed)
        alpha = alpha_n(pi4, n)
    wide = Rect(-2 * n, 2 * n, -n, n)
    tall = Rect(-n, n, -2 * n, 2 * n)
    records = []

    def prob(lam: float, rect: Rect, tag: str, c_val: float) -> float:
        lam = max(lam, 0.0)
        hits = crossing_counts(lam, rect, samples=samples, seed=seed,
                               stream=_STREAM_WINDOW)
        p = hits / samples
        records.append(EstimateRecord(
            experiment="window-check", lam=lam, n=n, quantity=tag, value=p,
            stderr=_binom_se(p, samples), n_samples=samples, seed=seed,
            params={"C": c_val, "alpha": alpha, "lambda_c": lambda_c}))
        return p

    c_low = math.inf
    c_high = math.inf
    for C in sorted(C_grid):
        p_minus = prob(lambda_c - C * alpha, wide, "cross_hard_minus", C)
        p_plus = prob(lambda_c + C * alpha, tall, "cross_easy_plus", C)
        if p_minus <= 0.25 and math.isinf(c_low):
            c_low = C
        if p_plus >= 0.75 and math.isinf(c_high):
            c_high = C

    p_mid = prob(lambda_c, wide, "cross_hard_mid", 0.0)
    shift = max(abs(prob(lambda_c + 0.1 * alpha, wide, "cross_hard_stab+", 0.1)
                    - p_mid),
                abs(prob(lambda_c - 0.1 * alpha, wide, "cross_hard_stab-", 0.1)
                    - p_mid))
    for tag, v in (("C_low", c_low), ("C_high", c_high),
                   ("stability_shift", shift), ("alpha_n", alpha)):
        records.append(EstimateRecord(
            experiment="window-check", lam=lambda_c, n=n, quantity=tag,
            value=v, stderr=0.0, n_samples=samples, seed=seed,
            params={"alpha": alpha, "lambda_c": lambda_c}))
    return SweepResult(records=records)


# === fits and inequality checks =========================================

def scaling_fit(n_values, medians) -> tuple[float, float]:
    """OLS slope of log(median) against log(n), with residual stderr."""
    x = np.log(np.asarray(n_values, dtype=np.float64))
    y = np.asarray(medians, dtype=np.float64)
    if x.size < 3:
        raise ValueError("need at least 3 scales")
    if np.any(y <= 0):
        raise ValueError("medians must be positive")
    y = np.log(y)
    xc = x - x.mean()
    sxx = float(xc @ xc)
    slope = float(xc @ y) / sxx
    resid = y - (y.mean() + slope * xc)
    dof = x.size - 2
    se = math.sqrt(max(float(resid @ resid), 0.0) / dof / sxx) if dof else 0.0
    return slope, se


def fkg_check(intensity: float, n: float, samples: int = 100_000,
              seed: int = 0) -> float:
    """Positive association of the two crossing events, as a z-score.

    Estimates P[both crossings] - P[horizontal]*P[vertical] on shared
    samples; the standard error comes from a bootstrap over batches of
    100.  Positive z means positive correlation observed.
    """
    sq = square(n)
    hv = np.empty((samples, 2), dtype=np.bool_)
    for i in range(samples):
        s = sample_for_query(sq, intensity, seed, index=i, margin=4.0,
                             stream=_STREAM_FKG)
        hv[i, 0] = occupied_crossing(s, CrossingQuery(sq, "horizontal", 1.0))
        hv[i, 1] = occupied_crossing(s, CrossingQuery(sq, "vertical", 1.0))
    both = float((hv[:, 0] & hv[:, 1]).mean())
    ph = float(hv[:, 0].mean())
    pv = float(hv[:, 1].mean())
    t = both - ph * pv

    nb = samples // BOOTSTRAP_BATCH
    if nb < 2:
        return 0.0 if t == 0 else math.copysign(math.inf, t)
    trim = nb * BOOTSTRAP_BATCH
    bb = hv[:trim].reshape(nb, BOOTSTRAP_BATCH, 2)
    b_both = (bb[:, :, 0] & bb[:, :, 1]).mean(axis=1)
    b_h = bb[:, :, 0].mean(axis=1)
    b_v = bb[:, :, 1].mean(axis=1)
    rng = rng_for(seed, stream=61)
    idx = rng.integers(0, nb, size=(_BOOTSTRAP_REPS, nb))
    t_star = (b_both[idx].mean(axis=1)
              - b_h[idx].mean(axis=1) * b_v[idx].mean(axis=1))
    se = float(np.std(t_star))
    if se == 0.0:
        return 0.0 if t == 0 else math.copysign(math.inf, t)
    return t / se


def rRR_check(R: float, r: float, samples: int = 4000, seed: int = 0,
              intensity: float = 0.3591,
              R_ref: float | None = None) -> float:
    """Scaling of the long-rectangle crossing deficit, as a z-score.

    d(R) = P[cross square 2R] - P[cross the (R+r) x R rectangle the long
    way] is estimated with both events on the same sample (the second
    implies the first, so the per-sample difference is an indicator).
    The deficit should shrink like r/R; the z-score compares d(R)
    against d(R_ref) scaled by R_ref/R, with R_ref defaulting to R/4.
    """
    if not 1 <= r <= R:
        raise ValueError("need 1 <= r <= R")
    if R_ref is None:
        R_ref = R / 4.0
    if R_ref < r:
        raise ValueError("reference scale smaller than r")

    def deficit(scale: float) -> tuple[float, float]:
        outer = Rect(-(scale + r), scale + r, -scale, scale)
        inner = square(scale)
        q_outer = CrossingQuery(outer, "horizontal", 1.0)
        q_inner = CrossingQuery(inner, "horizontal", 1.0)
        d = 0
        for i in range(samples):
            s = sample_for_query(outer, intensity, seed, index=i, margin=4.0,
                                 stream=_STREAM_RRR)
            big = occupied_crossing(s, q_outer)
            small = occupied_crossing(s, q_inner)
            if big and not small:
                raise AssertionError("crossing inclusion violated")
            d += small and not big
        p = d / samples
        return p, _binom_se(p, samples)

    d_big, se_big = deficit(R)
    d_ref, se_ref = deficit(R_ref)
    scale_f = R_ref / R
    se = math.hypot(se_big, se_ref * scale_f)
    if se == 0:
        return 0.0
    return (d_big - d_ref * scale_f) / se
