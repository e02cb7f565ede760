"""Layers with exact manual backpropagation.

Conventions shared by every layer:

* arrays are batch-first; a layer maps (N, ...) to (N, ...)
* ``params`` and ``grads`` are dicts with identical keys and shapes
* ``forward(x, cache=True)`` stores whatever backward needs on the instance;
  inference passes cache=False and then mutates nothing, which is what makes
  a trained model safe to share between threads for prediction
* ``backward(dout)`` returns the gradient w.r.t. the layer input and adds
  parameter gradients into ``grads`` (call zero_grads between minibatches)
"""

import numpy as np

from ..errors import ConfigError, NumericError, ShapeError


def sigmoid(z: np.ndarray) -> np.ndarray:
    # split at 0 so exp never overflows
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def relu(z: np.ndarray) -> np.ndarray:
    return np.maximum(z, 0.0)


def require_finite(name: str, arr: np.ndarray) -> None:
    if not np.all(np.isfinite(arr)):
        raise NumericError(f"{name}: non-finite values in output")


def glorot_uniform(rng, fan_in: int, fan_out: int, shape, dtype) -> np.ndarray:
    limit = float(np.sqrt(6.0 / (fan_in + fan_out)))
    return rng.uniform(-limit, limit, size=shape).astype(dtype)


class Layer:
    """Base layer: named parameters plus matching gradient buffers."""

    def __init__(self):
        self.params: dict[str, np.ndarray] = {}
        self.grads: dict[str, np.ndarray] = {}

    def add_param(self, name: str, value: np.ndarray) -> None:
        self.params[name] = value
        self.grads[name] = np.zeros_like(value)

    def zero_grads(self) -> None:
        for g in self.grads.values():
            g[...] = 0.0

    def forward(self, x, cache=True):
        raise NotImplementedError

    def backward(self, dout):
        raise NotImplementedError


class Dense(Layer):
    """y = activation(x W + b), activation in {None, "relu", "sigmoid"}."""

    def __init__(self, n_in, n_out, activation=None, rng=None, dtype=np.float32):
        super().__init__()
        if activation not in (None, "relu", "sigmoid"):
            raise ConfigError(f"unknown activation {activation!r}")
        if n_in < 1 or n_out < 1:
            raise ConfigError(f"dense dimensions must be positive, got ({n_in}, {n_out})")
        self.n_in, self.n_out, self.activation = n_in, n_out, activation
        rng = rng if rng is not None else np.random.default_rng(0)
        self.add_param("W", glorot_uniform(rng, n_in, n_out, (n_in, n_out), dtype))
        self.add_param("b", np.zeros(n_out, dtype=dtype))

    def forward(self, x, cache=True):
        x = np.asarray(x)
        if x.ndim != 2 or x.shape[1] != self.n_in:
            raise ShapeError(f"dense: expected input of shape (N, {self.n_in}), got {x.shape}")
        z = x @ self.params["W"] + self.params["b"]
        if self.activation == "relu":
            y = relu(z)
        elif self.activation == "sigmoid":
            y = sigmoid(z)
        else:
            y = z
        require_finite("dense", y)
        if cache:
            self._x, self._y = x, y
        return y

    def backward(self, dy):
        y = self._y
        if self.activation == "relu":
            dz = dy * (y > 0)
        elif self.activation == "sigmoid":
            dz = dy * y * (1.0 - y)
        else:
            dz = dy
        self.grads["W"] += self._x.T @ dz
        self.grads["b"] += dz.sum(axis=0)
        return dz @ self.params["W"].T


class Conv1D(Layer):
    """Valid 1-D convolution over (N, L, d) with F kernels of width k, then ReLU.

    Output is (N, L - k + 1, F); sequences shorter than k are a shape error.
    """

    def __init__(self, kernel_size, in_dim, filters, rng=None, dtype=np.float32):
        super().__init__()
        if kernel_size < 1 or in_dim < 1 or filters < 1:
            raise ConfigError(
                f"conv1d sizes must be positive, got k={kernel_size}, d={in_dim}, F={filters}"
            )
        self.k, self.d, self.f = kernel_size, in_dim, filters
        rng = rng if rng is not None else np.random.default_rng(0)
        self.add_param(
            "W",
            glorot_uniform(
                rng, kernel_size * in_dim, kernel_size * filters, (kernel_size, in_dim, filters), dtype
            ),
        )
        self.add_param("b", np.zeros(filters, dtype=dtype))

    def forward(self, x, cache=True):
        x = np.asarray(x)
        if x.ndim != 3 or x.shape[2] != self.d:
            raise ShapeError(f"conv1d: expected input of shape (N, L, {self.d}), got {x.shape}")
        n, length, _ = x.shape
        if length < self.k:
            raise ShapeError(f"conv1d: sequence length {length} is shorter than kernel size {self.k}")
        t = length - self.k + 1
        windows = np.lib.stride_tricks.sliding_window_view(x, self.k, axis=1)  # (N, T, d, k)
        cols = windows.transpose(0, 1, 3, 2).reshape(n * t, self.k * self.d)
        z = cols @ self.params["W"].reshape(self.k * self.d, self.f) + self.params["b"]
        y = relu(z).reshape(n, t, self.f)
        require_finite("conv1d", y)
        if cache:
            self._cols, self._y, self._in_shape = cols, y, x.shape
        return y

    def backward(self, dy):
        n, t, _ = self._y.shape
        dz = (dy * (self._y > 0)).reshape(n * t, self.f)
        self.grads["W"] += (self._cols.T @ dz).reshape(self.k, self.d, self.f)
        self.grads["b"] += dz.sum(axis=0)
        dcols = (dz @ self.params["W"].reshape(self.k * self.d, self.f).T).reshape(n, t, self.k, self.d)
        dx = np.zeros(self._in_shape, dtype=dcols.dtype)
        for j in range(self.k):
            dx[:, j : j + t, :] += dcols[:, :, j, :]
        return dx


class GlobalMaxPool(Layer):
    """Per-channel maximum over the time axis: (N, T, F) -> (N, F).

    The gradient routes to the first occurrence of each maximum (argmax
    tie-breaking), everything else gets zero.
    """

    def forward(self, x, cache=True):
        x = np.asarray(x)
        if x.ndim != 3:
            raise ShapeError(f"global_max_pool: expected (N, T, F), got {x.shape}")
        if x.shape[1] < 1:
            raise ShapeError("global_max_pool: empty time axis")
        amax = np.argmax(x, axis=1)  # first occurrence on ties
        y = np.take_along_axis(x, amax[:, None, :], axis=1)[:, 0, :]
        if cache:
            self._argmax, self._in_shape, self._dtype = amax, x.shape, x.dtype
        return y

    def backward(self, dy):
        n, _, f = self._in_shape
        dx = np.zeros(self._in_shape, dtype=self._dtype)
        dx[np.arange(n)[:, None], self._argmax, np.arange(f)[None, :]] = dy
        return dx


class Embedding(Layer):
    """Row lookup into a (V, d) matrix: (N, T) int -> (N, T, d).

    Row 0 is the PAD slot: it is forced to zero on construction and never
    receives gradient updates, so padding cannot leak signal. Pass
    trainable=False to freeze the whole table (it then exposes no params).
    """

    def __init__(self, weights, trainable=True, dtype=np.float32):
        super().__init__()
        weights = np.asarray(weights)
        if weights.ndim != 2:
            raise ShapeError(f"embedding weights must be 2-D, got shape {weights.shape}")
        self.weight = np.array(weights, dtype=dtype)
        self.weight[0, :] = 0.0
        self.vocab_size, self.dim = self.weight.shape
        self.trainable = trainable
        if trainable:
            self.params["W"] = self.weight
            self.grads["W"] = np.zeros_like(self.weight)

    def forward(self, ids, cache=True):
        ids = np.asarray(ids)
        if ids.ndim != 2:
            raise ShapeError(f"embedding: expected (N, T) integer ids, got shape {ids.shape}")
        if ids.size and (ids.min() < 0 or ids.max() >= self.vocab_size):
            raise ShapeError(
                f"embedding: ids must lie in [0, {self.vocab_size - 1}], "
                f"got range [{ids.min()}, {ids.max()}]"
            )
        if cache:
            self._ids = ids
        return self.weight[ids]

    def backward(self, dout):
        if self.trainable:
            np.add.at(self.grads["W"], self._ids, dout)
            self.grads["W"][0, :] = 0.0  # PAD row stays put
        return None


def lstm_step(x_t, h_prev, c_prev, params, return_gates=False):
    """One LSTM cell update, written out gate by gate.

    i = sigmoid(x W_i + h U_i + b_i)      input gate
    f = sigmoid(x W_f + h U_f + b_f)      forget gate
    o = sigmoid(x W_o + h U_o + b_o)      output gate
    g = tanh   (x W_g + h U_g + b_g)      candidate
    c' = f * c + i * g
    h' = o * tanh(c')

    ``params`` maps the eight matrices and four biases by those names. The
    LSTM layer computes the same math in packed form; the unit tests fold
    this function over time and require both routes to agree.
    """
    gates = {}
    for name in ("i", "f", "o", "g"):
        z = x_t @ params[f"W_{name}"] + h_prev @ params[f"U_{name}"] + params[f"b_{name}"]
        gates[name] = np.tanh(z) if name == "g" else sigmoid(z)
    c_next = gates["f"] * c_prev + gates["i"] * gates["g"]
    h_next = gates["o"] * np.tanh(c_next)
    if return_gates:
        return h_next, c_next, gates
    return h_next, c_next


class LSTM(Layer):
    """Single-layer LSTM over (N, T, d); forward returns the final hidden
    state (N, H). Initial h and c are zero. Backward is full BPTT."""

    GATES = ("i", "f", "o", "g")

    def __init__(self, in_dim, hidden, rng=None, dtype=np.float32):
        super().__init__()
        if in_dim < 1 or hidden < 1:
            raise ConfigError(f"lstm sizes must be positive, got d={in_dim}, H={hidden}")
        self.d, self.h = in_dim, hidden
        rng = rng if rng is not None else np.random.default_rng(0)
        for gate in self.GATES:
            self.add_param(f"W_{gate}", glorot_uniform(rng, in_dim, hidden, (in_dim, hidden), dtype))
            self.add_param(f"U_{gate}", glorot_uniform(rng, hidden, hidden, (hidden, hidden), dtype))
            self.add_param(f"b_{gate}", np.zeros(hidden, dtype=dtype))

    def _packed(self):
        # gate-blocked views built once per pass; cheap next to the matmuls
        wx = np.concatenate([self.params[f"W_{g}"] for g in self.GATES], axis=1)
        uh = np.concatenate([self.params[f"U_{g}"] for g in self.GATES], axis=1)
        b = np.concatenate([self.params[f"b_{g}"] for g in self.GATES])
        return wx, uh, b

    def forward(self, x, cache=True):
        x = np.asarray(x)
        if x.ndim != 3 or x.shape[2] != self.d:
            raise ShapeError(f"lstm: expected input of shape (N, T, {self.d}), got {x.shape}")
        if x.shape[1] < 1:
            raise ShapeError("lstm: empty time axis")
        wx, uh, b = self._packed()
        n, steps, _ = x.shape
        hh = self.h
        h = np.zeros((n, hh), dtype=x.dtype)
        c = np.zeros((n, hh), dtype=x.dtype)
        caches = []
        for t in range(steps):
            xt = x[:, t, :]
            z = xt @ wx + h @ uh + b
            i = sigmoid(z[:, :hh])
            f = sigmoid(z[:, hh : 2 * hh])
            o = sigmoid(z[:, 2 * hh : 3 * hh])
            g = np.tanh(z[:, 3 * hh :])
            c_next = f * c + i * g
            tc = np.tanh(c_next)
            h_next = o * tc
            if cache:
                caches.append((xt, h, c, i, f, o, g, tc))
            h, c = h_next, c_next
        require_finite("lstm", h)
        if cache:
            self._caches, self._in_shape = caches, x.shape
        return h

    def backward(self, dh):
        wx, uh, _ = self._packed()
        dwx = np.zeros_like(wx)
        duh = np.zeros_like(uh)
        db = np.zeros(4 * self.h, dtype=wx.dtype)
        dx = np.zeros(self._in_shape, dtype=wx.dtype)
        dc = np.zeros_like(dh)
        for t in reversed(range(len(self._caches))):
            xt, h_prev, c_prev, i, f, o, g, tc = self._caches[t]
            do = dh * tc
            dc = dc + dh * o * (1.0 - tc * tc)
            di = dc * g
            dg = dc * i
            df = dc * c_prev
            dz = np.concatenate(
                [di * i * (1 - i), df * f * (1 - f), do * o * (1 - o), dg * (1 - g * g)],
                axis=1,
            )
            dwx += xt.T @ dz
            duh += h_prev.T @ dz
            db += dz.sum(axis=0)
            dx[:, t, :] = dz @ wx.T
            dh = dz @ uh.T
            dc = dc * f
        hh = self.h
        for gi, gate in enumerate(self.GATES):
            block = slice(gi * hh, (gi + 1) * hh)
            self.grads[f"W_{gate}"] += dwx[:, block]
            self.grads[f"U_{gate}"] += duh[:, block]
            self.grads[f"b_{gate}"] += db[block]
        return dx
