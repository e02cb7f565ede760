"""End-to-end composition: preprocessing plus classifier as one unit.

A ToxicityModel is what gets saved to disk and what answers raw-text
queries; it owns the preprocessing configuration alongside the trained
estimator, so predictions are reproducible no matter where the text comes
from. An EncodedCorpus is the cached output of ``preprocess``: normalized
texts (what the NB path consumes) and encoded sequences (what the neural
path consumes) derived from one shared pass.
"""

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .data import LabeledComment
from .embeddings import EmbeddingMatrix
from .errors import ConfigError, DataError
from .models import CnnClassifier, LstmClassifier
from .naive_bayes import NaiveBayesClassifier
from .text import TextEncoder, Vocabulary, normalize
from .tfidf import TfidfVectorizer


@dataclass
class EncodedCorpus:
    """Preprocessed dataset: one normalization/vocabulary pass, reused by
    both model families."""

    ids: list[str]
    texts: list[str]               # normalized comment text
    sequences: np.ndarray          # (N, maxlen) int32
    labels: np.ndarray | None      # (N, 6) int32, None for unlabeled data
    vocabulary: Vocabulary
    maxlen: int


def encode_corpus(
    comments: Sequence[LabeledComment],
    maxlen: int = 200,
    vocab_size: int = 20000,
    min_count: int = 1,
) -> EncodedCorpus:
    """Normalize, build the vocabulary, and encode every comment."""
    texts = [normalize(c.text) for c in comments]
    encoder = TextEncoder(maxlen=maxlen, vocab_size=vocab_size, min_count=min_count).fit(texts)
    labeled = [c.labels is not None for c in comments]
    if any(labeled) and not all(labeled):
        raise DataError("corpus mixes labeled and unlabeled comments")
    labels = (
        np.array([c.labels for c in comments], dtype=np.int32)
        if comments and labeled[0]
        else None
    )
    return EncodedCorpus(
        ids=[c.id for c in comments],
        texts=texts,
        sequences=encoder.transform(texts),
        labels=labels,
        vocabulary=encoder.vocabulary_,
        maxlen=maxlen,
    )


def encoder_for(vocabulary: Vocabulary, maxlen: int) -> TextEncoder:
    """A TextEncoder pre-fitted with an existing vocabulary (no refit)."""
    encoder = TextEncoder(maxlen=maxlen, vocab_size=len(vocabulary))
    encoder.vocabulary_ = vocabulary
    return encoder


@dataclass
class ToxicityModel:
    """A trained classifier plus the preprocessing needed to score raw text.

    ``kind`` is "nb", "cnn" or "lstm". NB models carry a TfidfVectorizer,
    neural models a TextEncoder. ``embedding_coverage`` records (found,
    missing) vocabulary coverage of the pretrained vectors, when any.
    """

    kind: str
    classifier: object
    encoder: TextEncoder | None = None
    vectorizer: TfidfVectorizer | None = None
    embedding_coverage: tuple[int, int] | None = None

    def predict_proba(self, texts: Sequence[str]) -> np.ndarray:
        """Normalize raw comments and return (N, 6) per-label probabilities."""
        texts = list(texts)
        if self.kind == "nb":
            docs = [normalize(t) for t in texts]
            return self.classifier.predict_proba(self.vectorizer.transform(docs))
        return self.classifier.predict_proba(self.encoder.transform(texts))

    def predict(self, texts: Sequence[str], threshold: float = 0.5) -> np.ndarray:
        return (self.predict_proba(texts) >= threshold).astype(np.int32)


def train_nb(
    texts: Sequence[str],
    labels,
    alpha: float = 1.0,
    ngram_range: tuple[int, int] = (1, 2),
    max_features: int = 50000,
) -> ToxicityModel:
    """Fit the TF-IDF + Naive Bayes pipeline on normalized texts."""
    vectorizer = TfidfVectorizer(ngram_range=ngram_range, max_features=max_features)
    clf = NaiveBayesClassifier(alpha=alpha)
    clf.fit(vectorizer.fit_transform(list(texts)), labels)
    return ToxicityModel(kind="nb", classifier=clf, vectorizer=vectorizer)


def train_neural(kind: str, corpus: EncodedCorpus, embedding: EmbeddingMatrix, **params) -> ToxicityModel:
    """Fit a CNN or LSTM classifier on an encoded, labeled corpus."""
    if corpus.labels is None:
        raise DataError("training requires a labeled corpus")
    if kind == "cnn":
        clf = CnnClassifier(embedding=embedding, **params)
    elif kind == "lstm":
        clf = LstmClassifier(embedding=embedding, **params)
    else:
        raise ConfigError(f"unknown model kind {kind!r}")
    clf.fit(corpus.sequences, corpus.labels)
    return ToxicityModel(
        kind=kind,
        classifier=clf,
        encoder=encoder_for(corpus.vocabulary, corpus.maxlen),
        embedding_coverage=(embedding.found, embedding.missing),
    )
