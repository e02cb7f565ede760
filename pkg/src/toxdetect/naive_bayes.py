"""Per-label multinomial Naive Bayes over TF-IDF mass (one-vs-rest)."""

from typing import Sequence

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .errors import ConfigError, FitError, ShapeError
from .labels import NUM_LABELS
from .tfidf import SparseVector


class NaiveBayesClassifier(BaseEstimator):
    """Six independent binary multinomial NB models, one per label.

    For each label, class 0 means "label absent" and class 1 "label present".
    Feature likelihoods accept fractional TF-IDF mass:

        P(feature j | class) = (mass_j + alpha) / (total_mass + alpha * F)

    where mass_j sums x_j over the class members. Priors are raw class
    frequencies; a class with zero members keeps valid likelihoods through
    the smoothing and simply gets posterior 0. predict_proba combines the
    two per-class joint log scores with log-sum-exp.
    """

    def __init__(self, alpha: float = 1.0):
        self.alpha = alpha

    def fit(self, X: Sequence[SparseVector], Y):
        if self.alpha <= 0:
            raise ConfigError(f"alpha must be positive, got {self.alpha}")
        X = list(X)
        if not X:
            raise FitError("cannot fit Naive Bayes on an empty training set")
        Y = np.asarray(Y)
        if Y.shape != (len(X), NUM_LABELS):
            raise ShapeError(f"labels must have shape ({len(X)}, {NUM_LABELS}), got {Y.shape}")
        dim = X[0].dim
        for x in X:
            if x.dim != dim:
                raise ShapeError(f"inconsistent feature dimensions: {x.dim} != {dim}")
        mass = np.zeros((NUM_LABELS, 2, dim))
        counts = np.zeros((NUM_LABELS, 2))
        for x, y in zip(X, Y):
            for lab in range(NUM_LABELS):
                c = int(y[lab])
                if x.indices.size:
                    mass[lab, c, x.indices] += x.values
                counts[lab, c] += 1
        smoothed = mass + self.alpha
        self.feature_log_likelihood_ = np.log(smoothed / smoothed.sum(axis=2, keepdims=True))
        with np.errstate(divide="ignore"):
            self.class_log_prior_ = np.log(counts / len(X))
        self.class_count_ = counts
        self.n_features_ = dim
        return self

    def _check_fitted(self):
        if not hasattr(self, "feature_log_likelihood_"):
            raise NotFittedError("NaiveBayesClassifier must be fitted before predicting")

    def predict_proba(self, X: Sequence[SparseVector]) -> np.ndarray:
        """Per-label posterior P(label present | x), shape (N, 6)."""
        self._check_fitted()
        X = list(X)
        if not X:
            return np.zeros((0, NUM_LABELS))
        for x in X:
            if x.dim != self.n_features_:
                raise ShapeError(
                    f"vector dimension {x.dim} does not match model dimension {self.n_features_}"
                )
        n = len(X)
        nnz = np.array([x.indices.size for x in X])
        row_of = np.repeat(np.arange(n), nnz)
        if row_of.size:
            all_idx = np.concatenate([x.indices for x in X if x.indices.size])
            all_val = np.concatenate([x.values for x in X if x.values.size])
        probs = np.empty((n, NUM_LABELS))
        for lab in range(NUM_LABELS):
            scores = np.empty((2, n))
            for c in (0, 1):
                loglik = self.feature_log_likelihood_[lab, c]
                if row_of.size:
                    dots = np.bincount(row_of, weights=all_val * loglik[all_idx], minlength=n)
                else:
                    dots = np.zeros(n)
                scores[c] = self.class_log_prior_[lab, c] + dots
            probs[:, lab] = np.exp(scores[1] - np.logaddexp(scores[0], scores[1]))
        return probs

    def predict(self, X: Sequence[SparseVector], threshold: float = 0.5) -> np.ndarray:
        return (self.predict_proba(X) >= threshold).astype(np.int32)
