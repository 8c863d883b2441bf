"""Finite-difference gradient checking.

The loss is a fixed random projection of the model output, L = sum(r * y),
so every output element exercises the backward path. Central differences
with step 1e-5 on float64 parameters.
"""

from __future__ import annotations

import numpy as np


def _project(y, r):
    if isinstance(y, tuple):  # (real, imag) pair
        return float(np.sum(r[0] * y[0]) + np.sum(r[1] * y[1]))
    return float(np.sum(r * y))


def grad_check(model, x, rng: np.random.Generator, step: float = 1e-5) -> float:
    """Max relative error |g_a - g_n| / max(1e-8, |g_a| + |g_n|) over all parameters."""
    y = model.forward(x)
    if isinstance(y, tuple):
        r = (rng.standard_normal(y[0].shape), rng.standard_normal(y[1].shape))
        upstream = r
    else:
        r = rng.standard_normal(y.shape)
        upstream = r
    model.zero_grad()
    if isinstance(upstream, tuple):
        model.backward(*upstream)
    else:
        model.backward(upstream)
    analytic = [g.copy() for g in model.grads()]

    worst = 0.0
    for p, g_a in zip(model.params(), analytic):
        flat = p.reshape(-1)
        ga_flat = g_a.reshape(-1)
        for i in range(flat.size):
            orig = flat[i]
            flat[i] = orig + step
            lo_hi = _project(model.forward(x), r)
            flat[i] = orig - step
            lo_lo = _project(model.forward(x), r)
            flat[i] = orig
            g_n = (lo_hi - lo_lo) / (2.0 * step)
            err = abs(ga_flat[i] - g_n) / max(1e-8, abs(ga_flat[i]) + abs(g_n))
            worst = max(worst, err)
    return worst
