import math
from dataclasses import replace

import numpy as np
import pytest

from discperc import (ArmQuery, alpha_n, estimate_pi4, four_arm_annulus,
                      is_pivotal, russo_check, sample_for_query, square)
from discperc.arms import Pi4Estimate, with_extra_center


def _sample_with_centers(centers, region, margin=4.0):
    base = sample_for_query(region, 0.0, 0, margin=margin)
    return replace(base, centers=np.asarray(centers, dtype=np.float64))


def test_arm_query_validation():
    with pytest.raises(ValueError):
        ArmQuery(3.0, 2.0)
    with pytest.raises(ValueError):
        ArmQuery(0.0, 2.0)
    q = ArmQuery(1.0, 4.0)
    assert q.center == (0.0, 0.0)


def test_with_extra_center():
    s = _sample_with_centers([[1.0, 1.0]], square(4.0))
    t = with_extra_center(s, (0.0, -2.0))
    assert t.count == 2
    assert t.centers[-1].tolist() == [0.0, -2.0]
    with pytest.raises(ValueError):
        with_extra_center(s, (100.0, 0.0))
    empty = sample_for_query(square(4.0), 0.0, 0, margin=4.0)
    assert with_extra_center(empty, (0.0, 0.0)).count == 1


def test_is_pivotal_bridge():
    sq = square(2.0)
    # two discs nearly touching the sides, gap at the middle
    s = _sample_with_centers([[-1.9, 0.0], [1.9, 0.0]], sq)
    assert is_pivotal(s, sq, (0.0, 0.0))
    assert not is_pivotal(s, sq, (0.0, 1.8))
    # crossing already present: nothing is pivotal
    dense = _sample_with_centers([[-1.5, 0.0], [0.0, 0.0], [1.5, 0.0]], sq)
    assert not is_pivotal(dense, sq, (0.0, 0.0))


def test_is_pivotal_orientation():
    sq = square(2.0)
    s = _sample_with_centers([[0.0, -1.9], [0.0, 1.9]], sq)
    assert is_pivotal(s, sq, (0.0, 0.0), orientation="vertical")
    assert not is_pivotal(s, sq, (0.0, 0.0), orientation="horizontal")


def _spoke(angle, lo, hi, step=0.4):
    t = np.arange(lo, hi + step / 2, step)
    return np.column_stack([t * math.cos(angle), t * math.sin(angle)])


def test_four_arm_deterministic():
    ann = ArmQuery(2.0, 6.0)
    win = square(8.0)
    # occupied spokes north and south, vacant gaps east and west
    two = np.vstack([_spoke(math.pi / 2, 1.0, 7.0),
                     _spoke(-math.pi / 2, 1.0, 7.0)])
    assert four_arm_annulus(_sample_with_centers(two, win), ann)
    # a single occupied spoke cannot alternate twice
    one = _spoke(math.pi / 2, 1.0, 7.0)
    assert not four_arm_annulus(_sample_with_centers(one, win), ann)
    # an occupied circuit blocks the vacant arms and reaches no ring
    theta = np.linspace(0.0, 2 * math.pi, 60, endpoint=False)
    ring = np.column_stack([4.0 * np.cos(theta), 4.0 * np.sin(theta)])
    assert not four_arm_annulus(_sample_with_centers(ring, win), ann)
    # empty annulus: no occupied arms at all
    empty = sample_for_query(win, 0.0, 0, margin=4.0)
    assert not four_arm_annulus(empty, ann)


def test_four_arm_degenerate_ring():
    s = sample_for_query(square(8.0), 0.1, 5, margin=4.0)
    assert four_arm_annulus(s, ArmQuery(3.0, 3.0))


def test_estimate_pi4_methods_agree_in_order():
    piv = estimate_pi4(0.36, 8.0, 4000, method="pivotal", seed=19)
    ann = estimate_pi4(0.36, 8.0, 1200, method="annulus", seed=19)
    assert piv.value > 0 and ann.value > 0
    ratio = ann.value / piv.value
    assert 1.0 / 6.0 < ratio < 6.0, f"ratio={ratio:.2f}"
    assert piv.method == "pivotal" and ann.method == "annulus"
    with pytest.raises(ValueError):
        estimate_pi4(0.36, 8.0, 10, method="radial")


def test_alpha_n():
    assert alpha_n(0.01, 10.0) == pytest.approx(1.0)
    est = Pi4Estimate(value=0.04, stderr=0.001, n_samples=100,
                      method="pivotal")
    assert alpha_n(est, 5.0) == pytest.approx(1.0)
    assert math.isinf(alpha_n(0.0, 10.0))


def test_russo_finite_difference_vs_pivotal_integral():
    lhs, rhs, z = russo_check(0.36, 6.0, 0.02, 4000, seed=3)
    assert lhs > 0 and rhs > 0
    assert z < 4.0, f"lhs={lhs:.3f} rhs={rhs:.3f} z={z:.2f}"
