"""Classical resampling: Catmull-Rom bicubic upscaling and box-average downsampling.

Upscaling uses the cubic convolution kernel with a = -0.5, applied separably
(rows, then columns). Output sample centers sit at (i + 0.5) / factor - 0.5
in input coordinates and out-of-range taps clamp to the nearest edge sample.
"""

from __future__ import annotations

import numpy as np

from .grid import GridField

VALID_FACTORS = (1, 2, 4)


def _check_factor(factor: int) -> int:
    if factor not in VALID_FACTORS:
        raise ValueError(f"unsupported resample factor {factor}, expected one of {VALID_FACTORS}")
    return int(factor)


def cubic_kernel(x: np.ndarray | float) -> np.ndarray:
    """Catmull-Rom weight w(x) for a = -0.5; zero outside |x| < 2."""
    ax = np.abs(np.asarray(x, dtype=np.float64))
    w = np.zeros_like(ax)
    near = ax <= 1.0
    far = (ax > 1.0) & (ax < 2.0)
    a = ax[near]
    w[near] = ((1.5 * a - 2.5) * a) * a + 1.0
    a = ax[far]
    w[far] = ((-0.5 * a + 2.5) * a - 4.0) * a + 2.0
    return w


def _upscale_axis(arr: np.ndarray, factor: int, axis: int) -> np.ndarray:
    n = arr.shape[axis]
    src = (np.arange(n * factor, dtype=np.float64) + 0.5) / factor - 0.5
    base = np.floor(src).astype(np.int64)
    out = np.zeros(tuple(n * factor if d == axis else s for d, s in enumerate(arr.shape)))
    for tap in (-1, 0, 1, 2):
        idx = np.clip(base + tap, 0, n - 1)
        w = cubic_kernel(src - (base + tap))
        picked = np.take(arr, idx, axis=axis)
        shape = [1, 1]
        shape[axis] = w.size
        out += picked * w.reshape(shape)
    return out


def bicubic_upscale(field: GridField, factor: int) -> GridField:
    """Upscale both axes by ``factor``; factor 1 returns the field unchanged."""
    factor = _check_factor(factor)
    if factor == 1:
        return field
    arr = _upscale_axis(field.values, factor, axis=1)
    arr = _upscale_axis(arr, factor, axis=0)
    return field.with_values(arr)


def box_downsample(field: GridField, factor: int) -> GridField:
    """Average disjoint factor x factor blocks; dimensions must divide evenly."""
    factor = _check_factor(factor)
    if factor == 1:
        return field
    h, w = field.shape
    if h % factor or w % factor:
        raise ValueError(f"field {h}x{w} not divisible by downsample factor {factor}")
    blocks = field.values.reshape(h // factor, factor, w // factor, factor)
    return field.with_values(blocks.mean(axis=(1, 3)))
