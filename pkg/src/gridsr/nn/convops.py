"""Functional 2-D cross-correlation with edge-clamped same padding.

Inputs are laid out (height, width, channels), weights (out_c, in_c, kh, kw).
The kernel loop decomposes the correlation into kh*kw shifted matrix products
so no patch matrix is ever materialized.
"""

from __future__ import annotations

import numpy as np

ConvCache = tuple


def _pad_edge(x: np.ndarray, ph: int, pw: int) -> np.ndarray:
    if ph == 0 and pw == 0:
        return x
    return np.pad(x, ((ph, ph), (pw, pw), (0, 0)), mode="edge")


def _fold_edge_pad(gxp: np.ndarray, ph: int, pw: int) -> np.ndarray:
    """Adjoint of edge padding: clamped border gradients fold onto edge cells."""
    g = gxp
    if ph:
        g[ph] += g[:ph].sum(axis=0)
        g[-ph - 1] += g[-ph:].sum(axis=0)
        g = g[ph:-ph]
    if pw:
        g[:, pw] += g[:, :pw].sum(axis=1)
        g[:, -pw - 1] += g[:, -pw:].sum(axis=1)
        g = g[:, pw:-pw]
    return g.copy()


def conv2d_forward(
    x: np.ndarray, w: np.ndarray, b: np.ndarray, stride: int = 1
) -> tuple[np.ndarray, ConvCache]:
    """Same-padded cross-correlation; output is (ceil(h/stride), ceil(w/stride), out_c)."""
    h, wd, ic = x.shape
    oc, ic_w, kh, kw = w.shape
    if ic != ic_w:
        raise ValueError(f"input has {ic} channels but kernel expects {ic_w}")
    if kh % 2 == 0 or kw % 2 == 0:
        raise ValueError(f"kernel dims must be odd, got {kh}x{kw}")
    ph, pw = kh // 2, kw // 2
    xp = _pad_edge(x, ph, pw)
    ho = -(-h // stride)
    wo = -(-wd // stride)
    y = np.zeros((ho, wo, oc))
    for u in range(kh):
        for v in range(kw):
            xs = xp[u : u + h : stride, v : v + wd : stride, :].reshape(-1, ic)
            y += (xs @ w[:, :, u, v].T).reshape(ho, wo, oc)
    y += b
    cache = (x.shape, xp, w, stride)
    return y, cache


def conv2d_backward(
    gy: np.ndarray, cache: ConvCache
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Gradients (gx, gw, gb) of a scalar loss through conv2d_forward."""
    (h, wd, ic), xp, w, stride = cache
    oc, _, kh, kw = w.shape
    ph, pw = kh // 2, kw // 2
    ho, wo = gy.shape[:2]
    g2 = gy.reshape(-1, oc)
    gw = np.zeros_like(w)
    gxp = np.zeros_like(xp)
    for u in range(kh):
        for v in range(kw):
            xs = xp[u : u + h : stride, v : v + wd : stride, :].reshape(-1, ic)
            gw[:, :, u, v] = g2.T @ xs
            gxp[u : u + h : stride, v : v + wd : stride, :] += (g2 @ w[:, :, u, v]).reshape(
                ho, wo, ic
            )
    gb = g2.sum(axis=0)
    gx = _fold_edge_pad(gxp, ph, pw)
    return gx, gw, gb
