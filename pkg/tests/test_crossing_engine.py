import math
from dataclasses import replace

import numpy as np
import pytest

from discperc import (CensoringError, CrossingQuery, Rect,
                      activation_radius, bottleneck_radius,
                      effective_margin, occupied_crossing, rescale_sample,
                      sample_for_query, square, vacant_crossing)
from discperc.crossing_engine import boundary_activation, side_segments


def _sample_with_centers(centers, region, margin=4.0):
    base = sample_for_query(region, 0.0, 0, margin=margin)
    return replace(base, centers=np.asarray(centers, dtype=np.float64))


# --- activation primitives -------------------------------------------------

def test_activation_midpoint_inside():
    sq = square(2.0)
    assert activation_radius((-1.0, 0.0), (1.0, 0.0), sq) == pytest.approx(1.0)
    d = math.hypot(2.0, 1.0) / 2.0
    assert activation_radius((-1.0, -0.5), (1.0, 0.5), sq) == pytest.approx(d)
    assert activation_radius((0.5, 0.5), (0.5, 0.5), sq) == 0.0


def test_activation_midpoint_outside():
    sq = square(2.0)
    # both centers above the box on the y-axis: best meeting point is the
    # nearest top-edge point, and the farther center dominates
    assert activation_radius((0.0, 1.5), (0.0, 4.5), sq) == pytest.approx(2.5)
    # symmetric pair above the box: equidistant point (0, 2) wins
    assert activation_radius((-1.0, 3.0), (1.0, 3.0), sq) == pytest.approx(
        math.sqrt(2.0))


def test_activation_dense_grid_oracle():
    # brute minimization of max(|x-c1|, |x-c2|) over a fine rect grid
    rect = Rect(-1.0, 2.0, -1.5, 0.5)
    rng = np.random.default_rng(4)
    gx, gy = np.meshgrid(np.linspace(rect.x_min, rect.x_max, 901),
                         np.linspace(rect.y_min, rect.y_max, 601))
    for _ in range(25):
        c1 = rng.uniform(-3, 4, 2)
        c2 = rng.uniform(-3, 4, 2)
        d1 = np.hypot(gx - c1[0], gy - c1[1])
        d2 = np.hypot(gx - c2[0], gy - c2[1])
        brute = np.minimum.reduce([np.maximum(d1, d2).min()]).item()
        got = activation_radius(c1, c2, rect)
        assert got <= brute + 1e-9
        assert got >= brute - 6e-3, (c1, c2, got, brute)


def test_boundary_activation():
    side = ((2.0, -2.0), (2.0, 2.0))
    assert boundary_activation((3.0, 0.0), side) == pytest.approx(1.0)
    assert boundary_activation((3.0, 5.0), side) == pytest.approx(
        math.hypot(1.0, 3.0))
    assert boundary_activation((2.0, 1.0), side) == 0.0


def test_side_segments_orientation():
    rect = Rect(0.0, 4.0, 1.0, 2.0)
    (a, b) = side_segments(rect, "horizontal")
    assert a == ((0.0, 1.0), (0.0, 2.0)) and b == ((4.0, 1.0), (4.0, 2.0))
    (a, b) = side_segments(rect, "vertical")
    assert a == ((0.0, 1.0), (4.0, 1.0)) and b == ((0.0, 2.0), (4.0, 2.0))


# --- crossing decision -----------------------------------------------------

def test_query_validation():
    with pytest.raises(ValueError):
        CrossingQuery(square(2.0), "diagonal", 1.0)
    with pytest.raises(ValueError):
        CrossingQuery(square(2.0), "horizontal", 0.0)
    assert CrossingQuery(square(2.0), "horizontal", 1.0).axis == 0
    assert CrossingQuery(square(2.0), "vertical", 1.0).axis == 1


def test_single_disc_crossing():
    s = _sample_with_centers([[0.0, 0.0]], square(2.0))
    assert occupied_crossing(s, CrossingQuery(square(2.0), "horizontal", 2.0))
    assert not occupied_crossing(
        s, CrossingQuery(square(2.0), "horizontal", 2.0 - 1e-6))


def test_tangency_counts_as_connected():
    # discs touch each other at the origin and the sides at (+-2, 0)
    s = _sample_with_centers([[-1.0, 0.0], [1.0, 0.0]], square(2.0))
    assert occupied_crossing(s, CrossingQuery(square(2.0), "horizontal", 1.0))
    assert not occupied_crossing(
        s, CrossingQuery(square(2.0), "horizontal", 1.0 - 1e-9))


def test_chain_bottleneck_exact():
    s = _sample_with_centers([[-1.5, 0.0], [0.0, 0.0], [1.5, 0.0]],
                             square(2.0))
    res = bottleneck_radius(s, square(2.0), "horizontal")
    assert res.r_star == pytest.approx(0.75, abs=1e-12)
    assert not res.censored
    assert sorted(res.witness) == [0, 1, 2]

    s2 = _sample_with_centers([[-1.0, -0.5], [1.0, 0.5]], square(2.0))
    res2 = bottleneck_radius(s2, square(2.0), "horizontal")
    assert res2.r_star == pytest.approx(math.sqrt(5.0) / 2.0)


def test_duality_xor():
    sq = square(6.0)
    hq = CrossingQuery(sq, "horizontal", 1.0)
    for lam in (0.25, 0.36, 0.5):
        for i in range(700):
            s = sample_for_query(sq, lam, 17, index=i, margin=4.0)
            occ = occupied_crossing(s, hq)
            vac = vacant_crossing(s, sq, "vertical")
            assert occ != vac, f"XOR broken at lam={lam} index={i}"


def test_monotone_in_radius():
    sq = square(5.0)
    for i in range(150):
        s = sample_for_query(sq, 0.3, 29, index=i, margin=3.0)
        if occupied_crossing(s, CrossingQuery(sq, "horizontal", 0.9)):
            assert occupied_crossing(s, CrossingQuery(sq, "horizontal", 1.2))


def test_monotone_in_points():
    sq = square(5.0)
    rng = np.random.default_rng(77)
    for i in range(100):
        s = sample_for_query(sq, 0.45, 31, index=i, margin=2.0)
        if s.count < 2:
            continue
        keep = rng.random(s.count) < 0.7
        sub = replace(s, centers=s.centers[keep])
        q = CrossingQuery(sq, "vertical", 1.0)
        if occupied_crossing(sub, q):
            assert occupied_crossing(s, q)


def test_bottleneck_is_the_flip_point():
    sq = square(6.0)
    checked = 0
    for i in range(200):
        s = sample_for_query(sq, 0.3, 41, index=i, margin=4.0)
        res = bottleneck_radius(s, sq, "horizontal")
        if not math.isfinite(res.r_star) or res.censored:
            continue
        lo = res.r_star * (1.0 - 1e-9)
        hi = res.r_star * (1.0 + 1e-9)
        assert not occupied_crossing(s, CrossingQuery(sq, "horizontal", lo))
        assert occupied_crossing(s, CrossingQuery(sq, "horizontal", hi))
        checked += 1
    assert checked > 150


def test_bottleneck_matches_bisection_of_crossing():
    # independent route: bisect the monotone crossing indicator itself
    sq = square(5.0)
    for i in range(25):
        s = sample_for_query(sq, 0.36, 53, index=i, margin=4.0)
        if s.count == 0:
            continue
        res = bottleneck_radius(s, sq, "vertical")
        if res.censored:
            continue
        lo, hi = 0.0, 4.0
        if not occupied_crossing(s, CrossingQuery(sq, "vertical", hi)):
            continue
        for _ in range(45):
            mid = 0.5 * (lo + hi)
            if occupied_crossing(s, CrossingQuery(sq, "vertical", mid)):
                hi = mid
            else:
                lo = mid
        assert res.r_star == pytest.approx(hi, abs=1e-9)


def test_witness_supports_the_crossing():
    sq = square(6.0)
    for i in range(60):
        s = sample_for_query(sq, 0.3, 67, index=i, margin=4.0)
        res = bottleneck_radius(s, sq, "horizontal")
        if not math.isfinite(res.r_star) or res.censored:
            continue
        assert res.witness, "finite bottleneck must carry a witness chain"
        assert all(0 <= k < s.count for k in res.witness)
        sub = replace(s, centers=s.centers[np.array(res.witness)])
        assert occupied_crossing(
            sub, CrossingQuery(sq, "horizontal", res.r_star * (1 + 1e-9)))


def test_brute_force_union_find_twin():
    # independent oracle built only from the activation primitives
    def brute(s, rect, orientation, r):
        m = s.count
        if m == 0:
            return False
        lo_side, hi_side = side_segments(rect, orientation)
        parent = list(range(m + 2))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        def union(a, b):
            parent[find(a)] = find(b)

        for i in range(m):
            if boundary_activation(s.centers[i], lo_side) <= r:
                union(i, m)
            if boundary_activation(s.centers[i], hi_side) <= r:
                union(i, m + 1)
            for j in range(i + 1, m):
                if activation_radius(s.centers[i], s.centers[j], rect) <= r:
                    union(i, j)
        return find(m) == find(m + 1)

    sq = square(4.0)
    rng = np.random.default_rng(5)
    agree_true = 0
    for i in range(150):
        s = sample_for_query(sq, 0.4, 71, index=i, margin=2.0)
        r = float(rng.uniform(0.6, 1.6))
        orientation = "horizontal" if i % 2 else "vertical"
        got = occupied_crossing(s, CrossingQuery(sq, orientation, r))
        want = brute(s, sq, orientation, r)
        assert got == want, f"index={i} r={r:.4f}"
        agree_true += got
    assert 0 < agree_true < 150  # both outcomes exercised


def test_scale_equivariance():
    sq = square(5.0)
    for i in range(30):
        s = sample_for_query(sq, 0.35, 83, index=i, margin=4.0)
        res = bottleneck_radius(s, sq, "horizontal")
        if not math.isfinite(res.r_star) or res.censored:
            continue
        t = rescale_sample(s, 2.0)
        res2 = bottleneck_radius(t, sq.scaled(0.5), "horizontal")
        assert res2.r_star == pytest.approx(res.r_star / 2.0, rel=1e-12)


def test_censoring_error_when_window_too_small():
    sq = square(4.0)
    s = sample_for_query(sq, 0.3, 2, margin=1.0)
    with pytest.raises(CensoringError):
        occupied_crossing(s, CrossingQuery(sq, "horizontal", 1.5))
    # radius within the margin is fine
    occupied_crossing(s, CrossingQuery(sq, "horizontal", 1.0))


def test_bottleneck_censoring_flag():
    # two far-apart points: the chain needs a radius beyond the margin
    sq = square(4.0)
    s = _sample_with_centers([[-3.9, 3.9], [3.9, -3.9]], sq, margin=2.0)
    res = bottleneck_radius(s, sq, "horizontal")
    assert res.r_star > effective_margin(s, sq)
    assert res.censored


def test_empty_sample_degenerate():
    sq = square(3.0)
    s = sample_for_query(sq, 0.0, 0, margin=4.0)
    assert not occupied_crossing(s, CrossingQuery(sq, "horizontal", 1.0))
    assert vacant_crossing(s, sq, "vertical")
    res = bottleneck_radius(s, sq, "horizontal")
    assert math.isinf(res.r_star) and res.censored


def test_effective_margin():
    sq = square(3.0)
    s = sample_for_query(sq, 0.1, 0, margin=2.5)
    assert effective_margin(s, sq) == pytest.approx(2.5)
    inner = square(1.0)
    assert effective_margin(s, inner) == pytest.approx(4.5)
