"""Training losses and evaluation metrics for gridded fields.

Edge loss is the mean absolute difference between Sobel gradient magnitudes.
SSIM uses an 11x11 Gaussian window (sigma 1.5), C1 = (0.01*peak)^2,
C2 = (0.03*peak)^2, and valid-region windowing (no padding), so fields must
be at least 11 in each dimension.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .grid import GridField
from .nn import convops

SSIM_WINDOW = 11
SSIM_SIGMA = 1.5

_SOBEL_X = np.array([[-1.0, 0.0, 1.0], [-2.0, 0.0, 2.0], [-1.0, 0.0, 1.0]])
_SOBEL_KERNELS = np.stack([_SOBEL_X, _SOBEL_X.T])[:, None, :, :]  # (2, 1, 3, 3)
_SOBEL_BIAS = np.zeros(2)


def _check_same_shape(a: GridField, b: GridField) -> None:
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")


def mse_arr(a: np.ndarray, b: np.ndarray) -> float:
    d = a - b
    return float(np.mean(d * d))


def mae_arr(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.mean(np.abs(a - b)))


def mse(a: GridField, b: GridField) -> float:
    _check_same_shape(a, b)
    return mse_arr(a.values, b.values)


def mae(a: GridField, b: GridField) -> float:
    _check_same_shape(a, b)
    return mae_arr(a.values, b.values)


def sobel_magnitude(x: np.ndarray) -> np.ndarray:
    """Gradient magnitude from 3x3 Sobel with edge-clamped padding."""
    g, _ = convops.conv2d_forward(x[:, :, None], _SOBEL_KERNELS, _SOBEL_BIAS)
    return np.sqrt(g[:, :, 0] ** 2 + g[:, :, 1] ** 2)


def edge_loss_arr(a: np.ndarray, b: np.ndarray) -> float:
    return mae_arr(sobel_magnitude(a), sobel_magnitude(b))


def edge_loss(a: GridField, b: GridField) -> float:
    _check_same_shape(a, b)
    if min(a.shape) < 3:
        raise ValueError(f"edge loss needs dims >= 3, got {a.shape}")
    return edge_loss_arr(a.values, b.values)


def psnr_arr(a: np.ndarray, b: np.ndarray, peak: float = 1.0) -> float:
    if peak <= 0:
        raise ValueError("peak must be positive")
    m = mse_arr(a, b)
    if m == 0.0:
        return math.inf
    return 10.0 * math.log10(peak * peak / m)


def psnr(a: GridField, b: GridField, peak: float = 1.0) -> float:
    _check_same_shape(a, b)
    return psnr_arr(a.values, b.values, peak)


def _gaussian_window(size: int = SSIM_WINDOW, sigma: float = SSIM_SIGMA) -> np.ndarray:
    r = np.arange(size, dtype=np.float64) - (size - 1) / 2.0
    g = np.exp(-(r * r) / (2.0 * sigma * sigma))
    k = np.outer(g, g)
    return k / k.sum()


_SSIM_KERNEL = _gaussian_window()


def _filter_valid(x: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    win = sliding_window_view(x, kernel.shape)
    return np.einsum("ijuv,uv->ij", win, kernel, optimize=True)


def ssim_arr(a: np.ndarray, b: np.ndarray, peak: float = 1.0) -> float:
    if min(a.shape) < SSIM_WINDOW:
        raise ValueError(f"ssim needs dims >= {SSIM_WINDOW}, got {a.shape}")
    c1 = (0.01 * peak) ** 2
    c2 = (0.03 * peak) ** 2
    k = _SSIM_KERNEL
    mu_a = _filter_valid(a, k)
    mu_b = _filter_valid(b, k)
    var_a = _filter_valid(a * a, k) - mu_a * mu_a
    var_b = _filter_valid(b * b, k) - mu_b * mu_b
    cov = _filter_valid(a * b, k) - mu_a * mu_b
    num = (2.0 * mu_a * mu_b + c1) * (2.0 * cov + c2)
    den = (mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2)
    return float(np.mean(num / den))


def ssim(a: GridField, b: GridField, peak: float = 1.0) -> float:
    _check_same_shape(a, b)
    return ssim_arr(a.values, b.values, peak)


def perceptual_loss(content: float, adversarial: float, weight: float) -> float:
    """Composite generator objective: content plus weighted adversarial term."""
    if weight < 0:
        raise ValueError("adversarial weight must be non-negative")
    return content + weight * adversarial


@dataclass(frozen=True)
class MetricReport:
    mse: float
    mae: float
    psnr_db: float
    ssim: float

    def line(self) -> str:
        return (
            f"mse={self.mse:.17g} mae={self.mae:.17g} "
            f"psnr={self.psnr_db:.17g} ssim={self.ssim:.17g}"
        )


def evaluate(pred: GridField, truth: GridField, peak: float = 1.0) -> MetricReport:
    """All four metrics between a prediction and its reference."""
    _check_same_shape(pred, truth)
    return MetricReport(
        mse=mse(pred, truth),
        mae=mae(pred, truth),
        psnr_db=psnr(pred, truth, peak),
        ssim=ssim(pred, truth, peak),
    )


# Loss kernels for training: value plus gradient with respect to the prediction.


def mse_loss_grad(pred: np.ndarray, target: np.ndarray) -> tuple[float, np.ndarray]:
    d = pred - target
    return float(np.mean(d * d)), (2.0 / d.size) * d


def mae_loss_grad(pred: np.ndarray, target: np.ndarray) -> tuple[float, np.ndarray]:
    d = pred - target
    return float(np.mean(np.abs(d))), np.sign(d) / d.size


def edge_loss_grad(pred: np.ndarray, target: np.ndarray) -> tuple[float, np.ndarray]:
    gp, cache = convops.conv2d_forward(pred[:, :, None], _SOBEL_KERNELS, _SOBEL_BIAS)
    gt, _ = convops.conv2d_forward(target[:, :, None], _SOBEL_KERNELS, _SOBEL_BIAS)
    mag_p = np.sqrt(gp[:, :, 0] ** 2 + gp[:, :, 1] ** 2)
    mag_t = np.sqrt(gt[:, :, 0] ** 2 + gt[:, :, 1] ** 2)
    diff = mag_p - mag_t
    loss = float(np.mean(np.abs(diff)))
    dmag = np.sign(diff) / diff.size
    safe = np.maximum(mag_p, 1e-12)
    dgp = gp * (dmag / safe)[:, :, None]
    gx, _, _ = convops.conv2d_backward(dgp, cache)
    return loss, gx[:, :, 0]


def make_loss(kind: str, edge_weight: float = 0.1):
    """Training loss by name: mse, mae, edge, or composite (mse + w*edge)."""
    if kind == "mse":
        return mse_loss_grad
    if kind == "mae":
        return mae_loss_grad
    if kind == "edge":
        return edge_loss_grad
    if kind == "composite":

        def composite(pred, target):
            v1, g1 = mse_loss_grad(pred, target)
            v2, g2 = edge_loss_grad(pred, target)
            return v1 + edge_weight * v2, g1 + edge_weight * g2

        return composite
    raise ValueError(f"unknown loss kind {kind!r}")
