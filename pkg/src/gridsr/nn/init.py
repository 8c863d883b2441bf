"""Weight initialization schemes.

Sine networks use the scale-aware scheme: first layer U(-1/in, 1/in), hidden
layers U(-sqrt(6/in)/omega0, sqrt(6/in)/omega0). Everything else gets
He-style U(-sqrt(6/in), sqrt(6/in)). Dense biases draw from U(-1/sqrt(in),
1/sqrt(in)); conv biases start at zero.
"""

from __future__ import annotations

import math

import numpy as np


def siren_first_bound(fan_in: int) -> float:
    return 1.0 / fan_in


def siren_hidden_bound(fan_in: int, omega0: float) -> float:
    return math.sqrt(6.0 / fan_in) / omega0


def he_uniform_bound(fan_in: int) -> float:
    return math.sqrt(6.0 / fan_in)


def _fan_in(shape: tuple[int, ...]) -> int:
    if len(shape) == 2:  # dense (out, in)
        return shape[1]
    if len(shape) == 4:  # conv (out_c, in_c, kh, kw)
        return shape[1] * shape[2] * shape[3]
    raise ValueError(f"cannot infer fan-in for shape {shape}")


def init_weights(
    scheme: str, shape: tuple[int, ...], rng: np.random.Generator, omega0: float | None = None
) -> np.ndarray:
    """Draw weights for ``shape`` under the named scheme, deterministically per rng."""
    fan_in = _fan_in(shape)
    if scheme == "siren_first":
        bound = siren_first_bound(fan_in)
    elif scheme == "siren_hidden":
        if omega0 is None:
            raise ValueError("siren_hidden requires omega0")
        bound = siren_hidden_bound(fan_in, omega0)
    elif scheme == "he":
        bound = he_uniform_bound(fan_in)
    else:
        raise ValueError(f"unknown init scheme {scheme!r}")
    return rng.uniform(-bound, bound, size=shape)


def init_dense_bias(out_dim: int, fan_in: int, rng: np.random.Generator) -> np.ndarray:
    bound = 1.0 / math.sqrt(fan_in)
    return rng.uniform(-bound, bound, size=(out_dim,))
