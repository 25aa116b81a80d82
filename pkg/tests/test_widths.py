import math
from dataclasses import replace

import numpy as np
import pytest
from scipy import ndimage

import discperc.widths as widths_mod
from discperc import (CensoringError, ScalarField, coverage_mask,
                      default_pitch, grid_error_bound, occupied_width,
                      occupied_width_lower, sample_for_query, square,
                      vacant_distance_field, vacant_width, vacant_width_grid,
                      widest_path)
from discperc.widths import vacant_distance


def _sample_with_centers(centers, region, margin=4.0):
    base = sample_for_query(region, 0.0, 0, margin=margin)
    return replace(base, centers=np.asarray(centers, dtype=np.float64))


def _chain(n=2.0):
    xs = np.arange(-n, n + 0.5, 1.0)
    return _sample_with_centers(np.column_stack([xs, np.zeros_like(xs)]),
                                square(n))


def test_defaults():
    assert default_pitch(16.0) == pytest.approx(0.04)
    assert default_pitch(100.0) == pytest.approx(0.05)
    assert grid_error_bound(0.05) == pytest.approx(2.0 * math.sqrt(2) * 0.05)


def test_chain_corridor_is_sqrt3():
    # unit discs on a spacing-1 line: the narrowest clearance sits at a
    # lens tip, height sqrt(3)/2, so the corridor width is sqrt(3)
    s = _chain()
    res = occupied_width(s, 2.0, h=0.02)
    assert not res.censored
    assert res.width == pytest.approx(math.sqrt(3.0), abs=res.error_bound)


def test_chain_shrink_route_lower_bound():
    # shrunken-disc route: r solves r = sqrt(1 - r^2), width 2 sqrt(1-r^2)
    s = _chain()
    low = occupied_width_lower(s, 2.0)
    assert low.width == pytest.approx(math.sqrt(2.0), abs=1e-6)
    grid = occupied_width(s, 2.0, h=0.02)
    assert low.width <= grid.width + grid.error_bound


def test_vacant_pair_gap_exact():
    # two discs pinch the corridor to a 1.0 gap: r* = 1.5 exactly
    s = _sample_with_centers([[0.0, -1.5], [0.0, 1.5]], square(2.0))
    res = vacant_width(s, 2.0)
    assert res.width == pytest.approx(1.0, abs=1e-12)
    assert not res.censored
    assert res.error_bound == 0.0
    twin = vacant_width_grid(s, 2.0, h=0.02)
    assert twin.width == pytest.approx(res.width, abs=twin.error_bound)


def test_blocked_vacant_width_is_zero():
    # dense vertical chain: occupied set crosses at radius 1, no corridor
    ys = np.arange(-2.0, 2.5, 0.5)
    s = _sample_with_centers(np.column_stack([np.zeros_like(ys), ys]),
                             square(2.0))
    assert vacant_width(s, 2.0).width == 0.0


def test_grid_matches_exact_vacant_width():
    sq = square(8.0)
    h = 0.05
    bound = grid_error_bound(h) + 1e-9
    for i in range(100):
        s = sample_for_query(sq, 0.36, 101, index=i, margin=4.0)
        exact = vacant_width(s, 8.0)
        if exact.censored or math.isinf(exact.width):
            continue
        grid = vacant_width_grid(s, 8.0, h=h)
        assert abs(grid.width - exact.width) <= bound, f"index={i}"


def test_pitch_convergence():
    s = sample_for_query(square(6.0), 0.36, 103, index=5, margin=4.0)
    exact = vacant_width(s, 6.0)
    for h in (0.2, 0.1, 0.05):
        grid = vacant_width_grid(s, 6.0, h=h)
        assert abs(grid.width - exact.width) <= grid_error_bound(h) + 1e-9
    # occupied side has no closed form; successive refinements must agree
    # within the sum of their certified bounds
    w1 = occupied_width(s, 6.0, h=0.1)
    w2 = occupied_width(s, 6.0, h=0.05)
    assert abs(w1.width - w2.width) <= w1.error_bound + w2.error_bound


def test_widest_path_routes_agree(monkeypatch):
    rng = np.random.default_rng(9)
    for k in range(20):
        vals = rng.integers(0, 9, size=(60, 45)).astype(np.float64) \
            if k % 2 else rng.random((60, 45))
        field = ScalarField(values=vals, x0=0.0, y0=0.0, h=1.0)
        for orientation in ("horizontal", "vertical"):
            a = widest_path(field, orientation)
            monkeypatch.setattr(widths_mod, "_DIJKSTRA_MAX_CELLS", 0)
            b = widest_path(field, orientation)
            monkeypatch.setattr(widths_mod, "_DIJKSTRA_MAX_CELLS",
                                2_000_000)
            assert a == b, f"k={k} {orientation}"


def test_widest_path_threshold_oracle():
    # maximin equals the largest t whose superlevel set connects the sides
    # through an 8-connected component
    rng = np.random.default_rng(31)
    eight = np.ones((3, 3), dtype=bool)

    def oracle(vals, orientation):
        best = -math.inf
        for t in np.unique(vals):
            lab, _ = ndimage.label(vals >= t, structure=eight)
            if orientation == "horizontal":
                touch = set(lab[0, :]) & set(lab[-1, :])
            else:
                touch = set(lab[:, 0]) & set(lab[:, -1])
            if touch - {0}:
                best = max(best, float(t))
        return best

    for k in range(12):
        vals = rng.integers(0, 7, size=(24, 18)).astype(np.float64)
        field = ScalarField(values=vals, x0=0.0, y0=0.0, h=1.0)
        for orientation in ("horizontal", "vertical"):
            got = widest_path(field, orientation)
            assert got == oracle(vals, orientation), f"k={k} {orientation}"


def test_widest_path_axis_meaning():
    # values indexed [ix, iy]; a wall of zeros at one x blocks horizontal
    # crossings but not vertical ones
    vals = np.ones((10, 8))
    vals[4, :] = 0.0
    field = ScalarField(values=vals, x0=0.0, y0=0.0, h=1.0)
    assert widest_path(field, "horizontal") == 0.0
    assert widest_path(field, "vertical") == 1.0


def test_coverage_mask_geometry():
    s = _sample_with_centers([[0.0, 0.0]], square(2.0))
    mask = coverage_mask(s, square(2.0), h=0.02)
    frac = mask.values.mean()
    assert frac == pytest.approx(math.pi / 16.0, rel=0.02)
    nx = mask.nx
    assert mask.values[nx // 2, nx // 2]
    assert not mask.values[0, 0]


def test_vacant_field_matches_brute_distance():
    sq = square(4.0)
    s = sample_for_query(sq, 0.4, 107, index=2, margin=2.0)
    field = vacant_distance_field(s, sq, h=0.25)
    for ix in range(0, field.nx, 3):
        for iy in range(0, field.ny, 3):
            x = (field.x0 + ix * field.h, field.y0 + iy * field.h)
            assert field.values[ix, iy] == pytest.approx(
                vacant_distance(x, s), abs=1e-12)


def test_occupied_field_is_zero_on_vacancy():
    sq = square(3.0)
    s = sample_for_query(sq, 0.3, 109, index=0, margin=4.0)
    from discperc import occupied_distance_field
    field = occupied_distance_field(s, sq, h=0.1)
    mask = coverage_mask(s, sq, h=0.1)
    assert np.all(field.values[~mask.values] == 0.0)
    assert np.all(field.values[mask.values] > 0.0)


def test_field_crop():
    vals = np.arange(30.0).reshape(6, 5)
    field = ScalarField(values=vals, x0=1.0, y0=2.0, h=0.5)
    inner = field.crop(1)
    assert inner.values.shape == (4, 3)
    assert inner.x0 == pytest.approx(1.5)
    assert inner.y0 == pytest.approx(2.5)
    assert inner.values[0, 0] == vals[1, 1]


def test_occupied_width_needs_margin():
    s = sample_for_query(square(4.0), 0.4, 3, margin=2.0)
    with pytest.raises(CensoringError):
        occupied_width(s, 4.0, h=0.1)


def test_vacant_censoring_flag():
    # wide empty corridor: the exact width outruns the sampling margin
    s = _sample_with_centers([[-5.9, 5.9], [5.9, -5.9]], square(6.0),
                             margin=2.0)
    res = vacant_width(s, 6.0)
    assert res.censored


def test_empty_sample_widths():
    s = sample_for_query(square(3.0), 0.0, 0, margin=4.0)
    assert math.isinf(vacant_width(s, 3.0).width)
    grid = vacant_width_grid(s, 3.0, h=0.1)
    assert math.isinf(grid.width) and grid.censored
    occ = occupied_width(s, 3.0, h=0.1)
    assert occ.width == 0.0 and not occ.censored
