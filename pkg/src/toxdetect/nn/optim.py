"""Adam optimizer with bias-corrected first and second moments."""

import numpy as np


class Adam:
    """update = lr * m_hat / (sqrt(v_hat) + eps), moments keyed by parameter name.

    Call step() once per minibatch after the gradients for that batch have
    been accumulated; parameters are updated in place in dict order, which is
    fixed by model construction, so runs are reproducible.
    """

    def __init__(self, lr=1e-3, beta1=0.9, beta2=0.999, eps=1e-8):
        self.lr, self.beta1, self.beta2, self.eps = lr, beta1, beta2, eps
        self.t = 0
        self._m: dict[str, np.ndarray] = {}
        self._v: dict[str, np.ndarray] = {}

    def step(self, params: dict[str, np.ndarray], grads: dict[str, np.ndarray]) -> None:
        self.t += 1
        b1, b2 = self.beta1, self.beta2
        for name, p in params.items():
            g = grads[name]
            m = self._m.setdefault(name, np.zeros_like(p))
            v = self._v.setdefault(name, np.zeros_like(p))
            m += (1.0 - b1) * (g - m)          # m = b1 m + (1 - b1) g
            v += (1.0 - b2) * (g * g - v)      # v = b2 v + (1 - b2) g^2
            m_hat = m / (1.0 - b1**self.t)
            v_hat = v / (1.0 - b2**self.t)
            p -= self.lr * m_hat / (np.sqrt(v_hat) + self.eps)
