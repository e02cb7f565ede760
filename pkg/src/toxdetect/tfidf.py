"""Word n-gram TF-IDF features with smoothed idf and L2 document normalization."""

from collections import Counter
from dataclasses import dataclass
from typing import Iterable

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from .errors import ConfigError, FitError
from .text import tokenize


@dataclass(frozen=True)
class SparseVector:
    """One document as sorted (index, value) pairs in an F-dimensional space."""

    indices: np.ndarray  # int32, strictly increasing
    values: np.ndarray   # float64, aligned with indices
    dim: int

    @property
    def norm(self) -> float:
        return float(np.sqrt(np.sum(self.values**2)))


def ngrams(tokens: list[str], lo: int, hi: int) -> list[str]:
    """Contiguous word n-grams for n in [lo, hi], joined with single spaces."""
    out = []
    for n in range(lo, hi + 1):
        out.extend(" ".join(tokens[i : i + n]) for i in range(len(tokens) - n + 1))
    return out


class TfidfVectorizer(BaseEstimator, TransformerMixin):
    """TF-IDF over contiguous word n-grams of normalized text.

    fit() counts document frequencies, ranks n-grams by df descending (ties
    alphabetical), keeps the top ``max_features`` and assigns indices in that
    ranking order. idf_j = ln((1 + N) / (1 + df_j)) + 1 over the N fitted
    documents, so an n-gram present in every document still gets idf 1.
    transform() multiplies in-document counts by idf and L2-normalizes each
    nonempty vector.
    """

    def __init__(self, ngram_range: tuple[int, int] = (1, 2), max_features: int = 50000):
        self.ngram_range = ngram_range
        self.max_features = max_features

    def _check_config(self):
        lo, hi = self.ngram_range
        if not (1 <= lo <= hi):
            raise ConfigError(f"ngram_range must satisfy 1 <= lo <= hi, got {self.ngram_range!r}")
        if self.max_features < 1:
            raise ConfigError(f"max_features must be positive, got {self.max_features}")
        return lo, hi

    def fit(self, docs: Iterable[str], y=None):
        lo, hi = self._check_config()
        docs = list(docs)
        if not docs:
            raise FitError("cannot fit a TF-IDF vectorizer on an empty document list")
        df: Counter[str] = Counter()
        for doc in docs:
            df.update(set(ngrams(tokenize(doc), lo, hi)))
        ranked = sorted(df, key=lambda g: (-df[g], g))[: self.max_features]
        self.feature_names_ = tuple(ranked)
        self.feature_index_ = {g: j for j, g in enumerate(ranked)}
        df_vec = np.array([df[g] for g in ranked], dtype=np.float64)
        self.idf_ = np.log((1.0 + len(docs)) / (1.0 + df_vec)) + 1.0
        self.n_docs_ = len(docs)
        return self

    def _check_fitted(self):
        if not hasattr(self, "idf_"):
            raise NotFittedError("TfidfVectorizer must be fitted before transform")

    def transform_one(self, doc: str) -> SparseVector:
        self._check_fitted()
        lo, hi = self._check_config()
        counts: Counter[int] = Counter()
        for gram in ngrams(tokenize(doc), lo, hi):
            j = self.feature_index_.get(gram)
            if j is not None:
                counts[j] += 1
        dim = len(self.feature_names_)
        if not counts:
            return SparseVector(np.empty(0, np.int32), np.empty(0, np.float64), dim)
        idx = np.array(sorted(counts), dtype=np.int32)
        values = np.array([counts[j] for j in idx], dtype=np.float64) * self.idf_[idx]
        values /= np.sqrt(np.sum(values**2))
        return SparseVector(idx, values, dim)

    def transform(self, docs: Iterable[str]) -> list[SparseVector]:
        return [self.transform_one(doc) for doc in docs]
