"""Layer objects with cached forwards and accumulating backwards.

A layer's ``backward`` must follow its ``forward`` within the same step;
parameter gradients accumulate until ``zero_grad``. All arrays are float64.
Complex values travel as (real, imag) array pairs.
"""

from __future__ import annotations

import numpy as np

from . import convops
from .activations import ComplexGabor, Gauss, Relu, Sine


class Layer:
    def params(self) -> list[np.ndarray]:
        return []

    def grads(self) -> list[np.ndarray]:
        return []

    def zero_grad(self) -> None:
        for g in self.grads():
            g[...] = 0.0


class Dense(Layer):
    """y = x @ w.T + b with w of shape (out, in)."""

    def __init__(self, w: np.ndarray, b: np.ndarray):
        self.w = np.asarray(w, dtype=np.float64)
        self.b = np.asarray(b, dtype=np.float64)
        if self.w.ndim != 2 or self.b.shape != (self.w.shape[0],):
            raise ValueError(f"inconsistent dense shapes w{self.w.shape} b{self.b.shape}")
        self.gw = np.zeros_like(self.w)
        self.gb = np.zeros_like(self.b)
        self._x: np.ndarray | None = None

    def forward(self, x: np.ndarray) -> np.ndarray:
        if x.shape[-1] != self.w.shape[1]:
            raise ValueError(f"dense expects {self.w.shape[1]} inputs, got {x.shape[-1]}")
        self._x = x
        return x @ self.w.T + self.b

    def backward(self, gy: np.ndarray) -> np.ndarray:
        if self._x is None:
            raise RuntimeError("backward called before forward")
        self.gw += gy.T @ self._x
        self.gb += gy.sum(axis=0)
        return gy @ self.w

    def params(self):
        return [self.w, self.b]

    def grads(self):
        return [self.gw, self.gb]


class ComplexDense(Layer):
    """Complex y = W z + b with independent real/imaginary parameter parts."""

    def __init__(self, w_re, w_im, b_re, b_im):
        self.w_re = np.asarray(w_re, dtype=np.float64)
        self.w_im = np.asarray(w_im, dtype=np.float64)
        self.b_re = np.asarray(b_re, dtype=np.float64)
        self.b_im = np.asarray(b_im, dtype=np.float64)
        if self.w_re.shape != self.w_im.shape or self.b_re.shape != self.b_im.shape:
            raise ValueError("real/imag parameter shapes differ")
        self.gw_re = np.zeros_like(self.w_re)
        self.gw_im = np.zeros_like(self.w_im)
        self.gb_re = np.zeros_like(self.b_re)
        self.gb_im = np.zeros_like(self.b_im)
        self._z: tuple[np.ndarray, np.ndarray] | None = None

    def forward(self, z_re: np.ndarray, z_im: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        self._z = (z_re, z_im)
        y_re = z_re @ self.w_re.T - z_im @ self.w_im.T + self.b_re
        y_im = z_re @ self.w_im.T + z_im @ self.w_re.T + self.b_im
        return y_re, y_im

    def backward(self, g_re: np.ndarray, g_im: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        if self._z is None:
            raise RuntimeError("backward called before forward")
        z_re, z_im = self._z
        self.gw_re += g_re.T @ z_re + g_im.T @ z_im
        self.gw_im += g_im.T @ z_re - g_re.T @ z_im
        self.gb_re += g_re.sum(axis=0)
        self.gb_im += g_im.sum(axis=0)
        gz_re = g_re @ self.w_re + g_im @ self.w_im
        gz_im = g_im @ self.w_re - g_re @ self.w_im
        return gz_re, gz_im

    def params(self):
        return [self.w_re, self.w_im, self.b_re, self.b_im]

    def grads(self):
        return [self.gw_re, self.gw_im, self.gb_re, self.gb_im]


class Conv2d(Layer):
    """Edge-clamped same-padding cross-correlation on (h, w, c) arrays."""

    def __init__(self, w: np.ndarray, b: np.ndarray, stride: int = 1):
        self.w = np.asarray(w, dtype=np.float64)
        self.b = np.asarray(b, dtype=np.float64)
        if self.w.ndim != 4 or self.b.shape != (self.w.shape[0],):
            raise ValueError(f"inconsistent conv shapes w{self.w.shape} b{self.b.shape}")
        if self.w.shape[2] % 2 == 0 or self.w.shape[3] % 2 == 0:
            raise ValueError("conv kernel dims must be odd")
        self.stride = int(stride)
        self.gw = np.zeros_like(self.w)
        self.gb = np.zeros_like(self.b)
        self._cache = None

    def forward(self, x: np.ndarray) -> np.ndarray:
        y, self._cache = convops.conv2d_forward(x, self.w, self.b, stride=self.stride)
        return y

    def backward(self, gy: np.ndarray) -> np.ndarray:
        if self._cache is None:
            raise RuntimeError("backward called before forward")
        gx, gw, gb = convops.conv2d_backward(gy, self._cache)
        self.gw += gw
        self.gb += gb
        return gx

    def params(self):
        return [self.w, self.b]

    def grads(self):
        return [self.gw, self.gb]


class Activation(Layer):
    """Elementwise real activation layer (Relu, Sine or Gauss kinds)."""

    def __init__(self, kind: Relu | Sine | Gauss):
        if isinstance(kind, ComplexGabor):
            raise TypeError("use GaborActivation for complex Gabor")
        self.kind = kind
        self._z: np.ndarray | None = None

    def forward(self, z: np.ndarray) -> np.ndarray:
        self._z = z
        if isinstance(self.kind, Relu):
            return np.maximum(0.0, z)
        if isinstance(self.kind, Sine):
            return np.sin(self.kind.omega0 * z)
        return np.exp(-((self.kind.s * z) ** 2))

    def backward(self, gy: np.ndarray) -> np.ndarray:
        z = self._z
        if z is None:
            raise RuntimeError("backward called before forward")
        if isinstance(self.kind, Relu):
            return gy * (z > 0.0)
        if isinstance(self.kind, Sine):
            w = self.kind.omega0
            return gy * (w * np.cos(w * z))
        s2 = self.kind.s**2
        return gy * (-2.0 * s2 * z * np.exp(-s2 * z * z))


class GaborActivation(Layer):
    """Complex Gabor wavelet; accepts real input (imag treated as zero)."""

    def __init__(self, kind: ComplexGabor):
        self.kind = kind
        self._cache = None

    def forward(
        self, z_re: np.ndarray, z_im: np.ndarray | None = None
    ) -> tuple[np.ndarray, np.ndarray]:
        w, s = self.kind.omega0, self.kind.s0
        if z_im is None:
            env = np.exp(-((s * z_re) ** 2))
        else:
            env = np.exp(-w * z_im - s * s * (z_re * z_re + z_im * z_im))
        c = np.cos(w * z_re)
        sn = np.sin(w * z_re)
        self._cache = (z_re, z_im, env, c, sn)
        return env * c, env * sn

    def backward(self, g_re: np.ndarray, g_im: np.ndarray) -> tuple[np.ndarray, np.ndarray | None]:
        if self._cache is None:
            raise RuntimeError("backward called before forward")
        z_re, z_im, env, c, sn = self._cache
        w, s = self.kind.omega0, self.kind.s0
        denv_re = -2.0 * s * s * z_re * env
        gz_re = g_re * (denv_re * c - env * w * sn) + g_im * (denv_re * sn + env * w * c)
        if z_im is None:
            return gz_re, None
        denv_im = (-w - 2.0 * s * s * z_im) * env
        gz_im = g_re * (denv_im * c) + g_im * (denv_im * sn)
        return gz_re, gz_im


class Sequential(Layer):
    """Chain of real-valued layers."""

    def __init__(self, layers: list[Layer]):
        self.layers = list(layers)

    def forward(self, x: np.ndarray) -> np.ndarray:
        for layer in self.layers:
            x = layer.forward(x)
        return x

    def backward(self, gy: np.ndarray) -> np.ndarray:
        for layer in reversed(self.layers):
            gy = layer.backward(gy)
        return gy

    def params(self):
        return [p for layer in self.layers for p in layer.params()]

    def grads(self):
        return [g for layer in self.layers for g in layer.grads()]
