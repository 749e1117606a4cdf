"""Core raster types and sampling primitives.

All rasters are planar, row-major numpy arrays of float64:

    color image   (3, H, W)   intensities in [0, 1]
    gray image    (H, W)      intensities in [0, 1]
    feature map   (C, H, W)
    cost volume   (D, H, W)   similarity polarity (higher = better match)

Coordinates are (x, y) = (column, row); array indexing is ``[..., y, x]``.
Converters to and from other layouts live at the I/O boundary (dataio).

Everything here is a pure function over immutable inputs; nothing holds
hidden mutable state, so values are safe to share across threads for
reading.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Rec. 601 luma weights.
_LUMA = np.array([0.299, 0.587, 0.114])


def check_image(img: np.ndarray) -> np.ndarray:
    """Validate a (3, H, W) color raster and return it as float64.

    Raises ValueError if the shape is wrong, any value is non-finite or
    outside [0, 1], or either spatial dimension is below 2.
    """
    img = np.asarray(img, dtype=np.float64)
    if img.ndim != 3 or img.shape[0] != 3:
        raise ValueError(f"expected (3, H, W) image, got shape {img.shape}")
    if img.shape[1] < 2 or img.shape[2] < 2:
        raise ValueError("image must be at least 2x2")
    if not np.isfinite(img).all():
        raise ValueError("image contains non-finite values")
    if img.min() < 0.0 or img.max() > 1.0:
        raise ValueError("image values must lie in [0, 1]")
    return img


def to_grayscale(img: np.ndarray) -> np.ndarray:
    """Luminance raster: 0.299 R + 0.587 G + 0.114 B, shape (H, W)."""
    img = np.asarray(img, dtype=np.float64)
    return np.einsum("c,chw->hw", _LUMA, img)


def bilinear_sample(img: np.ndarray, x: float, y: float) -> tuple[np.ndarray, bool]:
    """Bilinearly interpolate a color image at a single (x, y) position.

    The four neighbors are (floor(x), floor(y)) and its +1 offsets; when a
    coordinate is exactly integral the interpolation collapses onto the
    lattice point, so no out-of-frame neighbor is required there.  If any
    required neighbor lies outside the raster the sample is flagged out of
    bounds and the returned color is all-zero (no clamping), so callers can
    exclude such pixels from losses.

    Returns (color, in_bounds) with color shape (3,).
    """
    colors, ok = bilinear_sample_map(img, np.asarray([x], dtype=np.float64),
                                     np.asarray([y], dtype=np.float64))
    return colors[:, 0], bool(ok[0])


def bilinear_sample_map(img: np.ndarray, xs: np.ndarray,
                        ys: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized bilinear sampling at float positions.

    xs and ys share an arbitrary common shape S; returns (colors, in_bounds)
    with colors shaped (3, *S), zero where out of bounds.  Uses the same
    neighbor convention as :func:`bilinear_sample`.
    """
    img = np.asarray(img, dtype=np.float64)
    _, h, w = img.shape
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)

    x0 = np.floor(xs)
    y0 = np.floor(ys)
    fx = xs - x0
    fy = ys - y0
    x1 = x0 + (fx > 0)
    y1 = y0 + (fy > 0)

    ok = (x0 >= 0) & (x1 <= w - 1) & (y0 >= 0) & (y1 <= h - 1)

    # Clip only for safe gathering; out-of-bounds results are zeroed below.
    x0i = np.clip(x0, 0, w - 1).astype(np.intp)
    x1i = np.clip(x1, 0, w - 1).astype(np.intp)
    y0i = np.clip(y0, 0, h - 1).astype(np.intp)
    y1i = np.clip(y1, 0, h - 1).astype(np.intp)

    top = (1.0 - fx) * img[:, y0i, x0i] + fx * img[:, y0i, x1i]
    bot = (1.0 - fx) * img[:, y1i, x0i] + fx * img[:, y1i, x1i]
    out = (1.0 - fy) * top + fy * bot
    out = np.where(ok, out, 0.0)
    return out, ok


@dataclass
class DisparityMap:
    """Per-pixel horizontal offsets plus a validity mask.

    disparity: (H, W) float64, in pixels, meaningful only where valid.
    valid:     (H, W) bool; invalid pixels are excluded from every loss
               and metric downstream.
    """

    disparity: np.ndarray
    valid: np.ndarray

    def __post_init__(self) -> None:
        self.disparity = np.asarray(self.disparity, dtype=np.float64)
        self.valid = np.asarray(self.valid, dtype=bool)
        if self.disparity.ndim != 2 or self.disparity.shape != self.valid.shape:
            raise ValueError("disparity and valid must be equal-shaped (H, W)")

    @property
    def height(self) -> int:
        return self.disparity.shape[0]

    @property
    def width(self) -> int:
        return self.disparity.shape[1]


@dataclass
class OcclusionMask:
    """Per-pixel occlusion values in [0, 1].

    kind "oracle" holds exact {0, 1} decisions derived from geometry;
    kind "soft" holds probabilities from any external predictor.
    """

    value: np.ndarray
    kind: str = "soft"

    def __post_init__(self) -> None:
        self.value = np.asarray(self.value, dtype=np.float64)
        if self.value.ndim != 2:
            raise ValueError("occlusion mask must be (H, W)")
        if self.kind not in ("oracle", "soft"):
            raise ValueError(f"unknown occlusion mask kind {self.kind!r}")
        if self.value.min() < 0.0 or self.value.max() > 1.0:
            raise ValueError("occlusion values must lie in [0, 1]")
        if self.kind == "oracle":
            if not np.all((self.value == 0.0) | (self.value == 1.0)):
                raise ValueError("oracle mask must contain only 0 or 1")


@dataclass
class CostVolume:
    """Similarity scores over candidate disparities.

    data:  (D, H, W) float64, entry [d, y, x] scores matching left pixel
           (x, y) against right pixel (x - d, y); higher is better.
    valid: (D, H, W) bool, false where the shifted position left the frame
           (data is zero-filled there, never a sentinel, so regression can
           renormalize over the valid support).
    """

    data: np.ndarray
    valid: np.ndarray
    polarity: str = "similarity"

    def __post_init__(self) -> None:
        self.data = np.asarray(self.data, dtype=np.float64)
        self.valid = np.asarray(self.valid, dtype=bool)
        if self.data.ndim != 3 or self.data.shape != self.valid.shape:
            raise ValueError("data and valid must be equal-shaped (D, H, W)")
        if self.data.shape[0] < 1:
            raise ValueError("cost volume needs at least one disparity plane")
        if not np.isfinite(self.data).all():
            raise ValueError("cost volume contains non-finite values")

    @property
    def num_disparities(self) -> int:
        return self.data.shape[0]
