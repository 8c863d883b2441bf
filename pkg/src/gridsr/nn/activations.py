"""Activation function families.

Real-valued: ReLU, sin(omega0*z), exp(-(s*z)^2). The complex Gabor wavelet
exp(i*omega0*z) * exp(-|s0*z|^2) maps real or complex inputs to complex
outputs; complex arrays are carried as (real, imag) pairs throughout.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Relu:
    pass


@dataclass(frozen=True)
class Sine:
    omega0: float = 30.0

    def __post_init__(self) -> None:
        if self.omega0 <= 0:
            raise ValueError("omega0 must be positive")


@dataclass(frozen=True)
class Gauss:
    s: float = 10.0

    def __post_init__(self) -> None:
        if self.s <= 0:
            raise ValueError("s must be positive")


@dataclass(frozen=True)
class ComplexGabor:
    omega0: float = 20.0
    s0: float = 10.0

    def __post_init__(self) -> None:
        if self.omega0 <= 0 or self.s0 <= 0:
            raise ValueError("omega0 and s0 must be positive")


ActivationKind = Relu | Sine | Gauss | ComplexGabor


def gabor(
    kind: ComplexGabor, z_re: np.ndarray, z_im: np.ndarray | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """exp(i*omega0*z) * exp(-|s0*z|^2) as a (real, imag) pair."""
    w, s = kind.omega0, kind.s0
    if z_im is None:
        env = np.exp(-((s * z_re) ** 2))
    else:
        env = np.exp(-w * z_im - s * s * (z_re * z_re + z_im * z_im))
    return env * np.cos(w * z_re), env * np.sin(w * z_re)


def activate(kind: ActivationKind, z, z_im: np.ndarray | None = None):
    """Apply an activation; ComplexGabor returns a (real, imag) pair."""
    if isinstance(kind, Relu):
        return np.maximum(0.0, z)
    if isinstance(kind, Sine):
        return np.sin(kind.omega0 * np.asarray(z))
    if isinstance(kind, Gauss):
        return np.exp(-((kind.s * np.asarray(z)) ** 2))
    if isinstance(kind, ComplexGabor):
        return gabor(kind, np.asarray(z, dtype=np.float64), z_im)
    raise TypeError(f"unknown activation kind {kind!r}")
