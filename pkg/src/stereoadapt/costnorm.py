"""Parameter-free normalization of matching features.

Two successive operations, applied once right before cost-volume
construction: channel normalization divides each channel by its spatial
L2 norm, pixel normalization then divides each per-pixel feature vector by
its channel-wise L2 norm.  Composed, the result is invariant to a global
positive rescaling of the input and every non-degenerate pixel vector ends
up with (almost exactly) unit norm.  Neither step subtracts a mean.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class NormConfig:
    epsilon: float = 1e-12
    apply_channel: bool = True
    apply_pixel: bool = True

    def __post_init__(self) -> None:
        if self.epsilon <= 0:
            raise ValueError("epsilon must be > 0")


def channel_normalize(f: np.ndarray, eps: float = 1e-12) -> np.ndarray:
    """Divide each channel by sqrt(sum of its squared values + eps)."""
    f = np.asarray(f, dtype=np.float64)
    denom = np.sqrt((f * f).sum(axis=(1, 2), keepdims=True) + eps)
    return f / denom

def pixel_normalize(f: np.ndarray, eps: float = 1e-12) -> np.ndarray:
    """Divide each per-pixel vector by sqrt(sum over channels of squares + eps)."""
    f = np.asarray(f, dtype=np.float64)
    denom = np.sqrt((f * f).sum(axis=0, keepdims=True) + eps)
    return f / denom


def cost_normalize(left: np.ndarray, right: np.ndarray,
                   cfg: NormConfig | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Normalize both views independently, channel step first, then pixel step."""
    if cfg is None:
        cfg = NormConfig()
    left = np.asarray(left, dtype=np.float64)
    right = np.asarray(right, dtype=np.float64)
    if left.shape != right.shape:
        raise ValueError(f"feature shapes differ: {left.shape} vs {right.shape}")
    out = []
    for f in (left, right):
        if cfg.apply_channel:
            f = channel_normalize(f, cfg.epsilon)
        if cfg.apply_pixel:
            f = pixel_normalize(f, cfg.epsilon)
        out.append(f)
    return out[0], out[1]
