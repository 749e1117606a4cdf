"""Color-space conversions and progressive cross-domain color transfer.

A source image is recolored toward a target domain by an affine map per
channel in a working color space: subtract the source mean, scale by the
ratio of target to source standard deviation, add the target mean.  The
target statistics are not taken from a single image but accumulated over
many target samples with a momentum update, so transferred images track
the color style of the whole target set rather than one exemplar.

Two working spaces are supported:

  "log-lab"  decorrelated log opponent space (default): RGB -> LMS cone
             response, log10, then orthogonal opponent axes.  Channel
             statistics are close to independent here, which is what makes
             the per-channel affine map well behaved.
  "cielab"   CIE L*a*b* under D65, with the sRGB transfer curve.

Both round-trip through RGB within a couple of 8-bit quantization steps.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

WORKING_SPACES = ("log-lab", "cielab")

# Intensities below this are floored before the log in "log-lab" so black
# pixels stay finite.
LOG_FLOOR = 1.0 / 255.0

# Minimum usable per-channel std of the source; below it the channel is
# treated as flat and left unscaled.
STD_GUARD = 1e-6

_RGB2LMS = np.array([
    [0.3811, 0.5783, 0.0402],
    [0.1967, 0.7244, 0.0782],
    [0.0241, 0.1288, 0.8444],
])
_LMS2RGB = np.array([
    [4.4679, -3.5873, 0.1193],
    [-1.2186, 2.3809, -0.1624],
    [0.0497, -0.2439, 1.2045],
])
# Opponent mixing of the log-LMS channels: achromatic, yellow-blue,
# red-green; rows are orthogonal, scaled to unit norm.
_LMS2OPP = np.diag([1.0 / np.sqrt(3.0), 1.0 / np.sqrt(6.0), 1.0 / np.sqrt(2.0)]) @ np.array([
    [1.0, 1.0, 1.0],
    [1.0, 1.0, -2.0],
    [1.0, -1.0, 0.0],
])
_OPP2LMS = np.array([
    [1.0, 1.0, 1.0],
    [1.0, 1.0, -1.0],
    [1.0, -2.0, 0.0],
]) @ np.diag([np.sqrt(3.0) / 3.0, np.sqrt(6.0) / 6.0, np.sqrt(2.0) / 2.0])

# sRGB <-> XYZ (D65) and the Lab white point.
_RGB2XYZ = np.array([
    [0.4124564, 0.3575761, 0.1804375],
    [0.2126729, 0.7151522, 0.0721750],
    [0.0193339, 0.1191920, 0.9503041],
])
_XYZ2RGB = np.linalg.inv(_RGB2XYZ)
_WHITE_D65 = np.array([0.95047, 1.0, 1.08883])


@dataclass
class ColorStats:
    """Per-channel mean and population standard deviation, working-space units."""

    mean: np.ndarray
    std: np.ndarray

    def __post_init__(self) -> None:
        self.mean = np.asarray(self.mean, dtype=np.float64).reshape(3)
        self.std = np.asarray(self.std, dtype=np.float64).reshape(3)
        if not (np.isfinite(self.mean).all() and np.isfinite(self.std).all()):
            raise ValueError("color stats must be finite")
        if (self.std < 0).any():
            raise ValueError("std components must be >= 0")


@dataclass
class TransferState:
    """Momentum-accumulated target-domain statistics.

    The first observed sample is assigned directly (a zero-initialized
    running mean would make early transfers nearly black); afterwards each
    update blends ``(1 - gamma) * running + gamma * sample``, so gamma=1
    means "always the latest sample" and gamma=0 freezes the state after
    initialization.
    """

    running_mean: np.ndarray
    running_std: np.ndarray
    gamma: float = 0.95
    initialized: bool = False
    space: str = "log-lab"

    def __post_init__(self) -> None:
        self.running_mean = np.asarray(self.running_mean, dtype=np.float64).reshape(3)
        self.running_std = np.asarray(self.running_std, dtype=np.float64).reshape(3)
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError("gamma must lie in [0, 1]")
        if self.space not in WORKING_SPACES:
            raise ValueError(f"unknown working space {self.space!r}")

    @classmethod
    def fresh(cls, gamma: float = 0.95, space: str = "log-lab") -> "TransferState":
        return cls(np.zeros(3), np.zeros(3), gamma=gamma, space=space)


def _matmul_pixels(m: np.ndarray, raster: np.ndarray) -> np.ndarray:
    return np.einsum("ij,jhw->ihw", m, raster)


def _srgb_to_linear(c: np.ndarray) -> np.ndarray:
    return np.where(c <= 0.04045, c / 12.92, ((c + 0.055) / 1.055) ** 2.4)


def _linear_to_srgb(c: np.ndarray) -> np.ndarray:
    c = np.maximum(c, 0.0)
    return np.where(c <= 0.0031308, c * 12.92, 1.055 * c ** (1.0 / 2.4) - 0.055)


def _lab_f(t: np.ndarray) -> np.ndarray:
    d = 6.0 / 29.0
    return np.where(t > d ** 3, np.cbrt(t), t / (3.0 * d * d) + 4.0 / 29.0)


def _lab_f_inv(t: np.ndarray) -> np.ndarray:
    d = 6.0 / 29.0
    return np.where(t > d, t ** 3, 3.0 * d * d * (t - 4.0 / 29.0))


def rgb_to_working(img: np.ndarray, space: str = "log-lab") -> np.ndarray:
    """Convert a (3, H, W) RGB raster in [0, 1] into the working space."""
    img = np.asarray(img, dtype=np.float64)
    if space == "log-lab":
        lms = _matmul_pixels(_RGB2LMS, img)
        lms = np.maximum(lms, LOG_FLOOR)
        return _matmul_pixels(_LMS2OPP, np.log10(lms))
    if space == "cielab":
        xyz = _matmul_pixels(_RGB2XYZ, _srgb_to_linear(img))
        f = _lab_f(xyz / _WHITE_D65[:, None, None])
        lightness = 116.0 * f[1] - 16.0
        a = 500.0 * (f[0] - f[1])
        b = 200.0 * (f[1] - f[2])
        return np.stack([lightness, a, b])
    raise ValueError(f"unknown working space {space!r}")


def working_to_rgb(raster: np.ndarray, space: str = "log-lab") -> np.ndarray:
    """Invert :func:`rgb_to_working`; output is clamped to [0, 1]."""
    raster = np.asarray(raster, dtype=np.float64)
    if space == "log-lab":
        lms = 10.0 ** _matmul_pixels(_OPP2LMS, raster)
        rgb = _matmul_pixels(_LMS2RGB, lms)
    elif space == "cielab":
        fy = (raster[0] + 16.0) / 116.0
        fx = fy + raster[1] / 500.0
        fz = fy - raster[2] / 200.0
        xyz = _lab_f_inv(np.stack([fx, fy, fz])) * _WHITE_D65[:, None, None]
        rgb = _linear_to_srgb(_matmul_pixels(_XYZ2RGB, xyz))
    else:
        raise ValueError(f"unknown working space {space!r}")
    return np.clip(rgb, 0.0, 1.0)


def channel_stats(raster: np.ndarray) -> ColorStats:
    """Mean and population standard deviation per channel over all pixels."""
    raster = np.asarray(raster, dtype=np.float64)
    if raster.size == 0:
        raise ValueError("cannot take statistics of an empty raster")
    return ColorStats(raster.mean(axis=(1, 2)), raster.std(axis=(1, 2)))


def momentum_update(state: TransferState, sample: ColorStats) -> TransferState:
    """Fold one target-domain sample into the running statistics.

    Returns a new state; the caller owns sequencing (single writer).
    """
    if not state.initialized:
        return replace(state, running_mean=sample.mean.copy(),
                       running_std=sample.std.copy(), initialized=True)
    g = state.gamma
    return replace(
        state,
        running_mean=(1.0 - g) * state.running_mean + g * sample.mean,
        running_std=(1.0 - g) * state.running_std + g * sample.std,
    )


def transfer_coefficients(source: ColorStats,
                          state: TransferState) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-channel (scale, source_mean, target_mean) of the affine recolor map.

    Channels whose source std falls below STD_GUARD keep scale 1 (a flat
    channel carries no contrast to rescale).
    """
    lam = np.where(source.std < STD_GUARD, 1.0, state.running_std / np.maximum(source.std, STD_GUARD))
    return lam, source.mean.copy(), state.running_mean.copy()


def transfer_raster(raster: np.ndarray, source: ColorStats,
                    state: TransferState) -> np.ndarray:
    """Apply the affine recolor map to a working-space raster (pre-clamp)."""
    lam, mu_s, mu_t = transfer_coefficients(source, state)
    return (lam[:, None, None] * (raster - mu_s[:, None, None])
            + mu_t[:, None, None])


def transfer_pair(left: np.ndarray, right: np.ndarray,
                  state: TransferState) -> tuple[np.ndarray, np.ndarray]:
    """Recolor both views of a stereo pair toward the accumulated target style.

    One set of source statistics, measured on the left view, drives both
    views, so the two images receive the identical affine map and their
    photometric correspondence survives the transfer.
    """
    if not state.initialized:
        raise ValueError("transfer state has no target statistics yet")
    wl = rgb_to_working(left, state.space)
    wr = rgb_to_working(right, state.space)
    source = channel_stats(wl)
    out_l = transfer_raster(wl, source, state)
    out_r = transfer_raster(wr, source, state)
    return working_to_rgb(out_l, state.space), working_to_rgb(out_r, state.space)
