"""CNN and LSTM toxicity classifiers built on the from-scratch layer kernels.

Both estimators share one training loop: seeded shuffle, the last 20% of the
shuffled data held out for validation, minibatch Adam on the mean binary
cross-entropy of the six sigmoid outputs. Everything is deterministic given
the seed; there is no early stopping, epochs are explicit configuration.
"""

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .embeddings import EmbeddingMatrix
from .errors import ConfigError, DataError, ShapeError
from .labels import NUM_LABELS
from .metrics import accuracy
from .nn.layers import LSTM, Conv1D, Dense, Embedding, GlobalMaxPool
from .nn.losses import binary_cross_entropy
from .nn.optim import Adam


@dataclass(frozen=True)
class EpochStats:
    """Metrics recorded after each training epoch."""

    epoch: int
    train_loss: float
    val_loss: float
    label_accuracy: tuple[float, ...]
    mean_accuracy: float


class _SequenceClassifier(BaseEstimator):
    """Shared machinery: embedding -> network -> Dense(6, sigmoid)."""

    kind = ""

    # subclasses return [(name, layer), ...] for everything after the embedding
    def _network_layers(self, rng, dtype, emb_dim):
        raise NotImplementedError

    def _embedding_weights(self, rng):
        if self.embedding is not None:
            weights = (
                self.embedding.weights
                if isinstance(self.embedding, EmbeddingMatrix)
                else np.asarray(self.embedding)
            )
            if weights.ndim != 2:
                raise ConfigError(f"embedding must be a 2-D matrix, got shape {weights.shape}")
            if self.vocab_size is not None and weights.shape[0] != self.vocab_size:
                raise ConfigError(
                    f"embedding has {weights.shape[0]} rows but vocab_size={self.vocab_size}"
                )
            if self.embedding_dim is not None and weights.shape[1] != self.embedding_dim:
                raise ConfigError(
                    f"embedding has dimension {weights.shape[1]} but embedding_dim={self.embedding_dim}"
                )
            return weights
        if self.vocab_size is None:
            raise ConfigError("provide an embedding matrix or vocab_size for random init")
        dim = 50 if self.embedding_dim is None else self.embedding_dim
        if self.vocab_size < 2 or dim < 1:
            raise ConfigError(
                f"vocab_size/embedding_dim must be >= 2/1, got {self.vocab_size}/{dim}"
            )
        weights = rng.uniform(-0.05, 0.05, (self.vocab_size, dim))
        weights[0] = 0.0
        return weights

    def initialize(self, rng=None):
        """Build all layers with seeded parameters.

        fit() calls this; it is public so untrained models can be gradient
        checked and zero-head tested.
        """
        dtype = np.dtype(self.dtype)
        rng = rng if rng is not None else np.random.default_rng(self.seed)
        weights = self._embedding_weights(rng)
        emb = Embedding(weights, trainable=self.trainable_embedding, dtype=dtype)
        self._named = [("embedding", emb)] + self._network_layers(rng, dtype, emb.dim)
        self._layers = [layer for _, layer in self._named]
        self.vocab_size_ = emb.vocab_size
        self.embedding_dim_ = emb.dim
        return self

    # -- parameter plumbing ------------------------------------------------

    def _check_built(self):
        if not hasattr(self, "_layers"):
            raise NotFittedError(f"{type(self).__name__}: call fit or initialize first")

    def parameters(self) -> dict[str, np.ndarray]:
        """Trainable parameters, keyed layer.name; excludes frozen embeddings."""
        self._check_built()
        return {
            f"{lname}.{pname}": arr
            for lname, layer in self._named
            for pname, arr in layer.params.items()
        }

    def gradients(self) -> dict[str, np.ndarray]:
        self._check_built()
        return {
            f"{lname}.{pname}": arr
            for lname, layer in self._named
            for pname, arr in layer.grads.items()
        }

    def weights(self) -> dict[str, np.ndarray]:
        """Every stateful array, frozen embedding included (for persistence)."""
        self._check_built()
        out = {"embedding.W": self._layers[0].weight}
        for lname, layer in self._named[1:]:
            for pname, arr in layer.params.items():
                out[f"{lname}.{pname}"] = arr
        return out

    def set_weights(self, weights: dict[str, np.ndarray]) -> None:
        self._check_built()
        own = self.weights()
        if set(own) != set(weights):
            raise ShapeError(
                f"weight names do not match: expected {sorted(own)}, got {sorted(weights)}"
            )
        for name, arr in own.items():
            new = np.asarray(weights[name])
            if new.shape != arr.shape:
                raise ShapeError(f"{name}: shape {new.shape} does not match {arr.shape}")
            arr[...] = new

    # -- forward / backward ------------------------------------------------

    def _validate_ids(self, X) -> np.ndarray:
        X = np.asarray(X)
        if X.ndim != 2:
            raise ShapeError(f"expected an (N, maxlen) integer matrix, got shape {X.shape}")
        if not np.issubdtype(X.dtype, np.integer):
            raise DataError(f"sequences must be integers, got dtype {X.dtype}")
        return X

    def _forward(self, X, cache=True):
        out = X
        for layer in self._layers:
            out = layer.forward(out, cache=cache)
        return out

    def loss_and_grads(self, X, y):
        """One forward/backward pass; returns (loss, params, grads).

        Gradients are freshly accumulated (zeroed first). This is the hook
        the finite-difference checks drive.
        """
        self._check_built()
        X = self._validate_ids(X)
        for layer in self._layers:
            layer.zero_grads()
        probs = self._forward(X)
        loss, dp = binary_cross_entropy(probs, y)
        grad = dp
        for layer in reversed(self._layers):
            grad = layer.backward(grad)
        return loss, self.parameters(), self.gradients()

    # -- training ----------------------------------------------------------

    def _validate_fit_args(self, X, y):
        X = self._validate_ids(X)
        y = np.asarray(y)
        if y.shape != (X.shape[0], NUM_LABELS):
            raise ShapeError(f"labels must have shape ({X.shape[0]}, {NUM_LABELS}), got {y.shape}")
        return X, y

    def fit(self, X, y):
        X, y = self._validate_fit_args(X, y)
        if not (0.0 < self.validation_fraction < 1.0):
            raise ConfigError(
                f"validation_fraction must lie in (0, 1), got {self.validation_fraction}"
            )
        if self.epochs < 0 or self.batch_size < 1:
            raise ConfigError(
                f"epochs must be >= 0 and batch_size >= 1, got {self.epochs}/{self.batch_size}"
            )
        n = X.shape[0]
        n_val = int(n * self.validation_fraction)
        n_train = n - n_val
        if n_val < 1 or n_train < 1:
            raise ConfigError(
                f"validation split leaves an empty side: {n} examples at "
                f"fraction {self.validation_fraction}"
            )
        resume = self.warm_start and hasattr(self, "_rng")
        if resume:
            if len(self.train_indices_) + len(self.validation_indices_) != n:
                raise ConfigError("warm_start requires the same dataset size as the first fit")
        else:
            rng = np.random.default_rng(self.seed)
            self.initialize(rng)
            perm = rng.permutation(n)
            self.train_indices_ = perm[:n_train]
            self.validation_indices_ = perm[n_train:]
            self._rng = rng
            self._optimizer = Adam(lr=self.learning_rate)
            self.history_ = []
        x_train, y_train = X[self.train_indices_], y[self.train_indices_]
        x_val, y_val = X[self.validation_indices_], y[self.validation_indices_]
        for _ in range(self.epochs):
            order = self._rng.permutation(len(x_train))
            batch_losses = []
            for start in range(0, len(order), self.batch_size):
                take = order[start : start + self.batch_size]
                loss, params, grads = self.loss_and_grads(x_train[take], y_train[take])
                self._optimizer.step(params, grads)
                batch_losses.append(loss)
            val_probs = self._forward(x_val, cache=False)
            val_loss, _ = binary_cross_entropy(val_probs, y_val)
            per_label, mean_acc = accuracy(val_probs, y_val)
            self.history_.append(
                EpochStats(
                    epoch=len(self.history_) + 1,
                    train_loss=float(np.mean(batch_losses)) if batch_losses else float("nan"),
                    val_loss=val_loss,
                    label_accuracy=tuple(float(a) for a in per_label),
                    mean_accuracy=mean_acc,
                )
            )
        return self

    def predict_proba(self, X) -> np.ndarray:
        """Six per-label probabilities per row; works on any length >= the
        receptive-field minimum, no training state is touched."""
        self._check_built()
        X = self._validate_ids(X)
        return self._forward(X, cache=False)

    def predict(self, X, threshold: float = 0.5) -> np.ndarray:
        return (self.predict_proba(X) >= threshold).astype(np.int32)


class CnnClassifier(_SequenceClassifier):
    """Embedding -> Conv1D(filters, kernel_size, ReLU) -> global max pool ->
    Dense(dense_units, ReLU) -> Dense(6, sigmoid).

    Pass ``embedding`` (an EmbeddingMatrix or raw (V, d) array) to start from
    pretrained vectors, or leave it None for seeded uniform(-0.05, 0.05)
    rows over ``vocab_size`` x ``embedding_dim`` (dimension defaults to 50). The PAD row is always
    zero-initialized there and never updated during training.
    """

    kind = "cnn"

    def __init__(
        self,
        embedding=None,
        vocab_size=None,
        embedding_dim=None,
        filters=64,
        kernel_size=3,
        dense_units=32,
        trainable_embedding=True,
        epochs=5,
        batch_size=32,
        learning_rate=1e-3,
        validation_fraction=0.2,
        seed=0,
        warm_start=False,
        dtype="float32",
    ):
        self.embedding = embedding
        self.vocab_size = vocab_size
        self.embedding_dim = embedding_dim
        self.filters = filters
        self.kernel_size = kernel_size
        self.dense_units = dense_units
        self.trainable_embedding = trainable_embedding
        self.epochs = epochs
        self.batch_size = batch_size
        self.learning_rate = learning_rate
        self.validation_fraction = validation_fraction
        self.seed = seed
        self.warm_start = warm_start
        self.dtype = dtype

    def _network_layers(self, rng, dtype, emb_dim):
        return [
            ("conv", Conv1D(self.kernel_size, emb_dim, self.filters, rng=rng, dtype=dtype)),
            ("pool", GlobalMaxPool()),
            ("hidden", Dense(self.filters, self.dense_units, activation="relu", rng=rng, dtype=dtype)),
            ("out", Dense(self.dense_units, NUM_LABELS, activation="sigmoid", rng=rng, dtype=dtype)),
        ]


class LstmClassifier(_SequenceClassifier):
    """Embedding -> LSTM(hidden_units), final hidden state -> Dense(6, sigmoid).

    Same embedding conventions as CnnClassifier.
    """

    kind = "lstm"

    def __init__(
        self,
        embedding=None,
        vocab_size=None,
        embedding_dim=None,
        hidden_units=64,
        trainable_embedding=True,
        epochs=5,
        batch_size=32,
        learning_rate=1e-3,
        validation_fraction=0.2,
        seed=0,
        warm_start=False,
        dtype="float32",
    ):
        self.embedding = embedding
        self.vocab_size = vocab_size
        self.embedding_dim = embedding_dim
        self.hidden_units = hidden_units
        self.trainable_embedding = trainable_embedding
        self.epochs = epochs
        self.batch_size = batch_size
        self.learning_rate = learning_rate
        self.validation_fraction = validation_fraction
        self.seed = seed
        self.warm_start = warm_start
        self.dtype = dtype

    def _network_layers(self, rng, dtype, emb_dim):
        return [
            ("lstm", LSTM(emb_dim, self.hidden_units, rng=rng, dtype=dtype)),
            ("out", Dense(self.hidden_units, NUM_LABELS, activation="sigmoid", rng=rng, dtype=dtype)),
        ]
