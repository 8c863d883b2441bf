"""Bicubic pre-upscale followed by a residual convolutional refinement network.

The network is feature extraction (ReLU conv), a stack of residual blocks
(conv-ReLU-conv plus identity), a non-linear mapping conv, a linear
reconstruction conv, and a global input-to-output skip connection. With all
weights zero the whole model is therefore exactly the identity map.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .grid import GridField, NormStats, denormalize, normalize
from .metrics import MetricReport, evaluate, make_loss
from .nn import checkpoint as ckpt
from .nn.activations import Relu
from .nn.layers import Activation, Conv2d, Layer
from .nn.init import init_weights
from .nn.optim import Adam, TrainingDiverged
from .resample import bicubic_upscale
from .seeding import substream

INPUT_RANGE = (-0.5, 1.5)


@dataclass(frozen=True)
class SrcnnConfig:
    feature_kernel: int = 9
    map_kernel: int = 5
    reconstruct_kernel: int = 5
    feature_channels: int = 64
    map_channels: int = 32
    n_residual_blocks: int = 4
    residual_kernel: int = 3

    def __post_init__(self) -> None:
        for name in ("feature_kernel", "map_kernel", "reconstruct_kernel", "residual_kernel"):
            if getattr(self, name) % 2 == 0 or getattr(self, name) < 1:
                raise ValueError(f"{name} must be odd and positive")
        if self.feature_channels < 1 or self.map_channels < 1:
            raise ValueError("channel counts must be >= 1")
        if self.n_residual_blocks < 0:
            raise ValueError("n_residual_blocks must be >= 0")


class ResidualBlock(Layer):
    """t + conv2(relu(conv1(t))); zero second conv makes the block an identity."""

    def __init__(self, conv1: Conv2d, conv2: Conv2d):
        self.conv1 = conv1
        self.conv2 = conv2
        self.act = Activation(Relu())

    def forward(self, t: np.ndarray) -> np.ndarray:
        return t + self.conv2.forward(self.act.forward(self.conv1.forward(t)))

    def backward(self, g: np.ndarray) -> np.ndarray:
        return g + self.conv1.backward(self.act.backward(self.conv2.backward(g)))

    def params(self):
        return self.conv1.params() + self.conv2.params()

    def grads(self):
        return self.conv1.grads() + self.conv2.grads()


class SrcnnModel:
    def __init__(
        self,
        config: SrcnnConfig,
        feature: Conv2d,
        blocks: list[ResidualBlock],
        map_conv: Conv2d,
        reconstruct: Conv2d,
        stats: NormStats | None = None,
    ):
        self.config = config
        self.feature = feature
        self.blocks = blocks
        self.map_conv = map_conv
        self.reconstruct = reconstruct
        self.stats = stats
        self._feature_act = Activation(Relu())
        self._map_act = Activation(Relu())

    @classmethod
    def init(
        cls, config: SrcnnConfig, rng: np.random.Generator, stats: NormStats | None = None
    ) -> "SrcnnModel":
        fc, mc = config.feature_channels, config.map_channels

        def conv(out_c, in_c, k):
            w = init_weights("he", (out_c, in_c, k, k), rng)
            return Conv2d(w, np.zeros(out_c))

        feature = conv(fc, 1, config.feature_kernel)
        blocks = [
            ResidualBlock(
                conv(fc, fc, config.residual_kernel), conv(fc, fc, config.residual_kernel)
            )
            for _ in range(config.n_residual_blocks)
        ]
        map_conv = conv(mc, fc, config.map_kernel)
        reconstruct = conv(1, mc, config.reconstruct_kernel)
        return cls(config, feature, blocks, map_conv, reconstruct, stats=stats)

    def forward(self, x: np.ndarray) -> np.ndarray:
        """Refine a normalized (h, w, 1) array; output has the same shape."""
        lo, hi = float(x.min()), float(x.max())
        if lo < INPUT_RANGE[0] or hi > INPUT_RANGE[1]:
            raise ValueError(
                f"input range [{lo:.3g}, {hi:.3g}] outside {INPUT_RANGE}; "
                "forward expects normalized fields"
            )
        t = self._feature_act.forward(self.feature.forward(x))
        for blk in self.blocks:
            t = blk.forward(t)
        t = self._map_act.forward(self.map_conv.forward(t))
        return self.reconstruct.forward(t) + x

    def backward(self, g: np.ndarray) -> np.ndarray:
        t = self._map_act.backward(self.reconstruct.backward(g))
        t = self.map_conv.backward(t)
        for blk in reversed(self.blocks):
            t = blk.backward(t)
        return self.feature.backward(self._feature_act.backward(t)) + g

    def params(self):
        out = self.feature.params()
        for blk in self.blocks:
            out += blk.params()
        return out + self.map_conv.params() + self.reconstruct.params()

    def grads(self):
        out = self.feature.grads()
        for blk in self.blocks:
            out += blk.grads()
        return out + self.map_conv.grads() + self.reconstruct.grads()

    def zero_grad(self):
        for g in self.grads():
            g[...] = 0.0

    def to_records(self) -> list[ckpt.Record]:
        records = [ckpt.Record(ckpt.TAG_MODEL_KIND, (float(ckpt.MODEL_SRCNN),))]
        if self.stats is not None:
            records.append(
                ckpt.Record(ckpt.TAG_NORM_STATS, (self.stats.min_val, self.stats.max_val))
            )
        convs = [self.feature]
        for blk in self.blocks:
            convs += [blk.conv1, blk.conv2]
        convs += [self.map_conv, self.reconstruct]
        relu_after = {0, len(convs) - 2} | {1 + 2 * i for i in range(len(self.blocks))}
        for i, conv in enumerate(convs):
            records.append(ckpt.Record(ckpt.TAG_CONV, (float(conv.stride),), (conv.w, conv.b)))
            if i in relu_after:
                records.append(ckpt.Record(ckpt.TAG_RELU))
        return records

    @classmethod
    def from_records(cls, records: list[ckpt.Record]) -> "SrcnnModel":
        if ckpt.model_kind(records) != ckpt.MODEL_SRCNN:
            raise ckpt.CheckpointError("not an srcnn checkpoint")
        stats = None
        body = records[1:]
        if body and body[0].tag == ckpt.TAG_NORM_STATS:
            stats = NormStats(*body[0].scalars)
            body = body[1:]
        convs = [
            Conv2d(r.arrays[0], r.arrays[1], stride=int(r.scalars[0]))
            for r in body
            if r.tag == ckpt.TAG_CONV
        ]
        if len(convs) < 3 or (len(convs) - 3) % 2:
            raise ckpt.CheckpointError(f"unexpected conv count {len(convs)} in srcnn checkpoint")
        n_blocks = (len(convs) - 3) // 2
        feature, map_conv, reconstruct = convs[0], convs[-2], convs[-1]
        blocks = [ResidualBlock(convs[1 + 2 * i], convs[2 + 2 * i]) for i in range(n_blocks)]
        config = SrcnnConfig(
            feature_kernel=feature.w.shape[2],
            map_kernel=map_conv.w.shape[2],
            reconstruct_kernel=reconstruct.w.shape[2],
            feature_channels=feature.w.shape[0],
            map_channels=map_conv.w.shape[0],
            n_residual_blocks=n_blocks,
            residual_kernel=blocks[0].conv1.w.shape[2] if blocks else SrcnnConfig.residual_kernel,
        )
        return cls(config, feature, blocks, map_conv, reconstruct, stats=stats)


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 30
    batch_size: int = 4
    lr: float = 1e-4
    loss: str = "mse"
    edge_weight: float = 0.1
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8


def _batches(order, size):
    for i in range(0, len(order), size):
        yield order[i : i + size]


def _generator_step(model, opt, batch, loss_fn, adv=None):
    """One Adam step on a batch; optionally adds an adversarial gradient term.

    ``adv(pred)`` returns (loss value, input-gradient or None). When it
    returns None the update is arithmetically identical to plain content
    training, which is what makes zero-weight adversarial runs reduce to
    content-only runs exactly.
    """
    model.zero_grad()
    b = len(batch)
    content_total = 0.0
    adv_total = 0.0
    for x, y in batch:
        pred = model.forward(x)
        val, gc = loss_fn(pred[:, :, 0], y)
        content_total += val
        g = gc[:, :, None]
        if adv is not None:
            adv_val, g_adv = adv(pred)
            adv_total += adv_val
            if g_adv is not None:
                g = g + g_adv
        model.backward(g / b)
    opt.step(model.grads())
    return content_total / b, adv_total / b


def prepare_pairs(pairs, stats, factor):
    """Normalize and bicubic-upscale each LR field; returns (x_hw1, y_hw) arrays."""
    out = []
    for lr, hr in pairs:
        x = bicubic_upscale(normalize(lr, stats), factor)
        y = normalize(hr, stats)
        out.append((x.values[:, :, None], y.values))
    return out


def train_srcnn(dataset, config: SrcnnConfig, hyper: TrainConfig, seed: int):
    """Minibatch Adam on the selected loss; returns (model, history rows).

    History rows are (epoch, train_loss, val_loss); deterministic per seed.
    """
    if not dataset.pairs:
        raise ValueError("empty dataset")
    if not dataset.train_idx:
        raise ValueError("dataset has no training split")
    factor = dataset.factor
    model = SrcnnModel.init(config, substream(seed, "model-init"), stats=dataset.stats)
    train_data = prepare_pairs(dataset.split_pairs("train"), dataset.stats, factor)
    val_data = prepare_pairs(dataset.split_pairs("val"), dataset.stats, factor)
    loss_fn = make_loss(hyper.loss, hyper.edge_weight)
    opt = Adam(model.params(), lr=hyper.lr, beta1=hyper.beta1, beta2=hyper.beta2, eps=hyper.eps)
    rng = substream(seed, "batches")
    history = []
    for epoch in range(1, hyper.epochs + 1):
        order = rng.permutation(len(train_data))
        batch_losses = []
        for chunk in _batches(order, hyper.batch_size):
            batch = [train_data[i] for i in chunk]
            content, _ = _generator_step(model, opt, batch, loss_fn)
            batch_losses.append(content)
        train_loss = float(np.mean(batch_losses))
        if val_data:
            val_loss = float(
                np.mean([loss_fn(model.forward(x)[:, :, 0], y)[0] for x, y in val_data])
            )
        else:
            val_loss = math.nan
        if not math.isfinite(train_loss):
            raise TrainingDiverged(epoch, train_loss)
        history.append((epoch, train_loss, val_loss))
    return model, history


def _require_stats(model: SrcnnModel) -> NormStats:
    if model.stats is None:
        raise ValueError("model has no normalization stats; train or load a full checkpoint")
    return model.stats


def _refined_iterates(model: SrcnnModel, field: GridField, factor: int, k: int):
    """Normalized upscaled input plus k successive refinement outputs."""
    stats = _require_stats(model)
    start = bicubic_upscale(normalize(field, stats), factor)
    iterates = []
    cur = start.values
    for i in range(1, k + 1):
        cur = model.forward(cur[:, :, None])[:, :, 0]
        if not np.isfinite(cur).all():
            raise RuntimeError(f"non-finite output at refinement iteration {i}")
        iterates.append(cur)
    return start, iterates


def upscale_srcnn(model: SrcnnModel, field: GridField, factor: int) -> GridField:
    """normalize -> bicubic -> refine -> denormalize."""
    _, iterates = _refined_iterates(model, field, factor, 1)
    out = GridField(iterates[0], var_name=field.var_name, units=field.units)
    return denormalize(out, model.stats)


def autoregress(
    model: SrcnnModel,
    field: GridField,
    factor: int,
    k: int,
    truth: GridField | None = None,
) -> tuple[GridField, list[MetricReport]]:
    """Apply the refinement network k times after one bicubic upscale.

    Per-iteration metrics are computed in normalized space against the truth
    field when given, otherwise against the previous iterate (the bicubic
    baseline for iteration 1), which makes iteration drift observable.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    stats = _require_stats(model)
    start, iterates = _refined_iterates(model, field, factor, k)
    if truth is not None:
        ref = normalize(truth, stats)
    else:
        ref = start
    reports = []
    for cur in iterates:
        cur_field = GridField(cur)
        reports.append(evaluate(cur_field, ref))
        if truth is None:
            ref = cur_field
    out = GridField(iterates[-1], var_name=field.var_name, units=field.units)
    return denormalize(out, stats), reports
