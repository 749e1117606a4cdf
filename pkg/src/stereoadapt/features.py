"""Deterministic per-pixel descriptors for matching.

A cheap, training-free recipe: grayscale intensity, Sobel gradients, and
census comparisons, all computed at a downsampled resolution.  Channels
appear in a fixed order so feature maps are reproducible bit for bit:

    [intensity] [sobel-x] [sobel-y] [census_0 ... census_{k-1}]

where census channel i compares the i-th window neighbor (row-major,
center excluded) against the center: 1.0 if strictly greater, else 0.0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .core import to_grayscale

_SOBEL_X = np.array([[-1.0, 0.0, 1.0], [-2.0, 0.0, 2.0], [-1.0, 0.0, 1.0]])
_SOBEL_Y = _SOBEL_X.T


@dataclass
class FeatureConfig:
    """Knobs for the descriptor stack.

    downsample: spatial stride; the image is area-averaged over
        stride x stride blocks first (trailing rows/columns that do not
        fill a block are dropped, i.e. floor division of the dimensions).
    census_window: odd window size for census comparisons.
    """

    downsample: int = 2
    census_window: int = 3
    include_gradients: bool = True
    include_intensity: bool = True

    def __post_init__(self) -> None:
        if self.downsample < 1:
            raise ValueError("downsample must be >= 1")
        if self.census_window < 3 or self.census_window % 2 == 0:
            raise ValueError("census_window must be odd and >= 3")

    @property
    def channel_count(self) -> int:
        return (int(self.include_intensity) + 2 * int(self.include_gradients)
                + self.census_window ** 2 - 1)


def _area_downsample(gray: np.ndarray, stride: int) -> np.ndarray:
    if stride == 1:
        return gray
    h, w = gray.shape
    hh, ww = h // stride, w // stride
    cropped = gray[:hh * stride, :ww * stride]
    return cropped.reshape(hh, stride, ww, stride).mean(axis=(1, 3))


def _census(gray: np.ndarray, window: int) -> np.ndarray:
    r = window // 2
    padded = np.pad(gray, r, mode="edge")
    h, w = gray.shape
    channels = []
    for dy in range(-r, r + 1):
        for dx in range(-r, r + 1):
            if dy == 0 and dx == 0:
                continue
            neighbor = padded[r + dy:r + dy + h, r + dx:r + dx + w]
            channels.append((neighbor > gray).astype(np.float64))
    return np.stack(channels)


def extract_features(img: np.ndarray, cfg: FeatureConfig | None = None) -> np.ndarray:
    """Compute the descriptor stack of an image, shape (C, H', W').

    H' = H // downsample, W' = W // downsample.  Sobel and census use
    replicate padding at the borders.  Identical inputs always produce
    bitwise-identical output.
    """
    if cfg is None:
        cfg = FeatureConfig()
    gray = _area_downsample(to_grayscale(img), cfg.downsample)
    if gray.shape[0] < cfg.census_window or gray.shape[1] < cfg.census_window:
        raise ValueError("image too small for the census window after downsampling")

    channels = []
    if cfg.include_intensity:
        channels.append(gray)
    if cfg.include_gradients:
        channels.append(ndimage.correlate(gray, _SOBEL_X, mode="nearest"))
        channels.append(ndimage.correlate(gray, _SOBEL_Y, mode="nearest"))
    return np.concatenate([np.stack(channels) if channels else
                           np.empty((0,) + gray.shape),
                           _census(gray, cfg.census_window)])
