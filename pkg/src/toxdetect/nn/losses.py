"""Binary cross-entropy over per-label sigmoid outputs."""

import numpy as np

from ..errors import ShapeError

CLIP = 1e-7


def binary_cross_entropy(p, y):
    """Mean over all label slots of -[y ln p + (1 - y) ln(1 - p)].

    Probabilities are clipped to [1e-7, 1 - 1e-7] before the logs, so the
    loss is finite even at p of exactly 0 or 1. Returns (loss, dloss/dp);
    slots where the clip was active get zero gradient, everywhere else the
    gradient is the exact derivative of the clipped expression.
    """
    p = np.asarray(p)
    y = np.asarray(y, dtype=p.dtype)
    if p.shape != y.shape:
        raise ShapeError(f"bce: probability shape {p.shape} != label shape {y.shape}")
    pc = np.clip(p, CLIP, 1.0 - CLIP)
    loss = float(np.mean(-(y * np.log(pc) + (1.0 - y) * np.log1p(-pc))))
    grad = (-(y / pc) + (1.0 - y) / (1.0 - pc)) / p.size
    grad = grad * ((p >= CLIP) & (p <= 1.0 - CLIP))
    return loss, grad
