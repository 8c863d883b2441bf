"""Reverse-mode neural-net engine: layers, activations, Adam, init, checkpoints."""

from .activations import ActivationKind, ComplexGabor, Gauss, Relu, Sine, activate, gabor
from .checkpoint import (
    CHECKPOINT_MAGIC,
    MODEL_DISCRIMINATOR,
    MODEL_INR,
    MODEL_SRCNN,
    CheckpointError,
    Record,
    decode_records,
    encode_records,
    load_records,
    model_kind,
    save_records,
)
from .convops import conv2d_backward, conv2d_forward
from .gradcheck import grad_check
from .init import (
    he_uniform_bound,
    init_dense_bias,
    init_weights,
    siren_first_bound,
    siren_hidden_bound,
)
from .layers import (
    Activation,
    ComplexDense,
    Conv2d,
    Dense,
    GaborActivation,
    Layer,
    Sequential,
)
from .optim import Adam, TrainingDiverged, adam_step

__all__ = [
    "ActivationKind",
    "Relu",
    "Sine",
    "Gauss",
    "ComplexGabor",
    "activate",
    "gabor",
    "Layer",
    "Dense",
    "ComplexDense",
    "Conv2d",
    "Activation",
    "GaborActivation",
    "Sequential",
    "conv2d_forward",
    "conv2d_backward",
    "Adam",
    "adam_step",
    "TrainingDiverged",
    "grad_check",
    "init_weights",
    "init_dense_bias",
    "he_uniform_bound",
    "siren_first_bound",
    "siren_hidden_bound",
    "Record",
    "encode_records",
    "decode_records",
    "save_records",
    "load_records",
    "model_kind",
    "CheckpointError",
    "CHECKPOINT_MAGIC",
    "MODEL_SRCNN",
    "MODEL_DISCRIMINATOR",
    "MODEL_INR",
]
