"""Central finite-difference verification of analytic gradients."""

import numpy as np


def grad_check(loss_fn, params, grads, step=1e-5):
    """Compare analytic gradients against (f(p + h) - f(p - h)) / 2h.

    ``loss_fn()`` must re-evaluate the scalar loss from the current contents
    of ``params`` (which are perturbed in place and restored); ``grads``
    holds the analytic gradients at the unperturbed point. Returns the
    largest relative error max over elements of

        |analytic - numeric| / max(|analytic|, |numeric|, 1e-8)

    Run with float64 parameters; float32 rounding swamps the h^2 truncation
    term and makes the comparison meaningless.
    """
    worst = 0.0
    for name in params:
        flat_p = params[name].reshape(-1)
        flat_g = grads[name].reshape(-1)
        for j in range(flat_p.size):
            orig = flat_p[j]
            flat_p[j] = orig + step
            f_plus = loss_fn()
            flat_p[j] = orig - step
            f_minus = loss_fn()
            flat_p[j] = orig
            numeric = (f_plus - f_minus) / (2.0 * step)
            analytic = float(flat_g[j])
            rel = abs(analytic - numeric) / max(abs(analytic), abs(numeric), 1e-8)
            worst = max(worst, rel)
    return worst
