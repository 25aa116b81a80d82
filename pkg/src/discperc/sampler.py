"""Poisson point process sampling on padded rectangles.

Every random draw in the package flows through this module.  The generator
is counter-based (Philox) and keyed by (master seed, stream, sample index),
so per-sample substreams are independent of scheduling order and a batch
sharded across workers reproduces the single-worker output bit for bit.

Count generation: numpy's Generator.poisson, which uses inversion for small
means and the PTRS transformed-rejection method (no normal approximation)
for large means.  Positions are then drawn as one uniform block of shape
(count, 2).  This draw order is part of the reproducibility contract:
replaying (seed, index, intensity, region) yields byte-identical centers.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

_MASK64 = (1 << 64) - 1
_MASK48 = (1 << 48) - 1


@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle [x_min, x_max] x [y_min, y_max]."""

    x_min: float
    x_max: float
    y_min: float
    y_max: float

    def __post_init__(self) -> None:
        if not (np.isfinite([self.x_min, self.x_max, self.y_min, self.y_max]).all()):
            raise ValueError("rectangle coordinates must be finite")
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise ValueError(
                f"degenerate rectangle: [{self.x_min}, {self.x_max}] x "
                f"[{self.y_min}, {self.y_max}]"
            )

    @property
    def width(self) -> float:
        return self.x_max - self.x_min

    @property
    def height(self) -> float:
        return self.y_max - self.y_min

    @property
    def area(self) -> float:
        return self.width * self.height

    def dilated(self, pad: float) -> "Rect":
        """Rectangle grown by pad on every side (pad may be negative)."""
        return Rect(self.x_min - pad, self.x_max + pad,
                    self.y_min - pad, self.y_max + pad)

    def scaled(self, factor: float) -> "Rect":
        """Coordinates multiplied by factor (about the origin)."""
        return Rect(self.x_min * factor, self.x_max * factor,
                    self.y_min * factor, self.y_max * factor)

    def contains(self, x: float, y: float) -> bool:
        return self.x_min <= x <= self.x_max and self.y_min <= y <= self.y_max


def square(n: float) -> Rect:
    """The square [-n, n]^2."""
    return Rect(-n, n, -n, n)


@dataclass(frozen=True, eq=False)
class PointSample:
    """One realization of the Poisson process on a padded window.

    centers has shape (m, 2).  margin records how far the sampling region
    extends beyond the query rectangle it was drawn for; index is the
    sample counter within a batch (0 for standalone draws).
    """

    centers: np.ndarray
    intensity: float
    seed: int
    region: Rect
    margin: float = 0.0
    index: int = 0

    def __post_init__(self) -> None:
        c = np.asarray(self.centers, dtype=np.float64)
        if c.ndim != 2 or c.shape[1] != 2:
            c = c.reshape(-1, 2)
        object.__setattr__(self, "centers", np.ascontiguousarray(c))

    @property
    def count(self) -> int:
        return self.centers.shape[0]


def rng_for(seed: int, index: int = 0, stream: int = 0) -> np.random.Generator:
    """Philox substream for (seed, stream, index).

    The 128-bit Philox key is [seed, stream << 48 | index]; distinct streams
    never collide for index < 2**48, which every batch in this package
    satisfies by orders of magnitude.
    """
    word = ((stream & 0xFFFF) << 48) | (index & _MASK48)
    return np.random.Generator(np.random.Philox(key=[seed & _MASK64, word]))


def sample_poisson(region: Rect, intensity: float, seed: int,
                   index: int = 0, margin: float = 0.0,
                   stream: int = 0) -> PointSample:
    """Draw a Poisson(intensity * area) sample of uniform points on region.

    Deterministic given (region, intensity, seed, index, stream); see the
    module docstring for the draw-order contract.
    """
    if not np.isfinite(intensity) or intensity < 0:
        raise ValueError(f"intensity must be finite and >= 0, got {intensity}")
    if not isinstance(region, Rect):
        raise ValueError("region must be a Rect")
    rng = rng_for(seed, index, stream)
    count = int(rng.poisson(intensity * region.area)) if intensity > 0 else 0
    pts = rng.random((count, 2))
    pts[:, 0] = region.x_min + region.width * pts[:, 0]
    pts[:, 1] = region.y_min + region.height * pts[:, 1]
    return PointSample(centers=pts, intensity=float(intensity), seed=int(seed),
                       region=region, margin=float(margin), index=int(index))


def sample_for_query(rect: Rect, intensity: float, seed: int,
                     index: int = 0, margin: float = 4.0,
                     stream: int = 0) -> PointSample:
    """Sample on rect dilated by margin, recording the margin.

    margin >= r guarantees every disc of radius r that can intersect rect
    has its center inside the window; the default 4 leaves headroom for
    enlarged-disc queries up to radius 4.
    """
    if margin < 0:
        raise ValueError("margin must be nonnegative")
    return sample_poisson(rect.dilated(margin), intensity, seed,
                          index=index, margin=margin, stream=stream)


def rescale_sample(sample: PointSample, factor: float) -> PointSample:
    """Map every center x to x / factor; the scaling law made deterministic.

    The pushforward of a Poisson process of intensity lambda under x -> x/r
    is again Poisson with intensity lambda * r**2 (areas shrink by r**-2),
    and the recorded intensity is updated accordingly.  Region and margin
    scale by 1/r; seed and index are preserved so the provenance of the
    underlying draw stays visible.
    """
    if not np.isfinite(factor) or factor <= 0:
        raise ValueError(f"scale factor must be positive, got {factor}")
    if factor == 1.0:
        return sample
    return replace(
        sample,
        centers=sample.centers / factor,
        intensity=sample.intensity * factor * factor,
        region=sample.region.scaled(1.0 / factor),
        margin=sample.margin / factor,
    )
