"""From-scratch neural network kernels: layers, loss, optimizer, gradient checker."""

from .gradcheck import grad_check
from .layers import (
    LSTM,
    Conv1D,
    Dense,
    Embedding,
    GlobalMaxPool,
    Layer,
    glorot_uniform,
    lstm_step,
    relu,
    sigmoid,
)
from .losses import binary_cross_entropy
from .optim import Adam

__all__ = [
    "Adam",
    "Conv1D",
    "Dense",
    "Embedding",
    "GlobalMaxPool",
    "LSTM",
    "Layer",
    "binary_cross_entropy",
    "glorot_uniform",
    "grad_check",
    "lstm_step",
    "relu",
    "sigmoid",
]
