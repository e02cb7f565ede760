"""Text normalization, tokenization, vocabulary building and sequence encoding."""

import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from .errors import ConfigError

PAD_INDEX = 0
OOV_INDEX = 1
PAD_TOKEN = "<pad>"
OOV_TOKEN = "<oov>"

_URL_RE = re.compile(r"(?:https?://|www\.)\S*")
_MENTION_RE = re.compile(r"@\S+")
# leetspeak digits that commonly stand in for letters; 2/6/8/9 are left alone
_LEET_TABLE = str.maketrans("013457", "oieast")
_NON_TOKEN_RE = re.compile(r"[^a-z0-9']")
_WS_RE = re.compile(r"\s+")


def normalize(text: str) -> str:
    """Normalize a raw comment for downstream tokenization.

    Steps, in order: lowercase; strip URLs (http/https/www) and @-mentions
    entirely; map the digits 0/1/3/4/5/7 to o/i/e/a/s/t inside whitespace
    chunks that contain at least one letter (so "g00d" becomes "good" while
    "2001" survives); replace every character outside [a-z0-9'] with a space;
    collapse runs of whitespace and trim.

    Total on arbitrary input and idempotent: normalize(normalize(s)) equals
    normalize(s). Output tokens always match [a-z0-9']+.
    """
    text = text.lower()
    text = _URL_RE.sub(" ", text)
    text = _MENTION_RE.sub(" ", text)
    chunks = []
    for chunk in text.split():
        if any(c.isalpha() for c in chunk):
            chunk = chunk.translate(_LEET_TABLE)
        chunks.append(chunk)
    text = " ".join(chunks)
    text = _NON_TOKEN_RE.sub(" ", text)
    return _WS_RE.sub(" ", text).strip()


def tokenize(normalized: str) -> list[str]:
    """Whitespace-split an already-normalized string. Never yields empty tokens."""
    return normalized.split()


@dataclass(frozen=True)
class Vocabulary:
    """Token-to-index mapping with reserved slots: 0 is PAD, 1 is OOV.

    ``tokens[i]`` is the token at index i and ``frequencies[i]`` its corpus
    count (0 for the two reserved slots). ``index`` never maps anything to 0
    or 1. Immutable once built.
    """

    tokens: tuple[str, ...]
    frequencies: tuple[int, ...]
    index: dict[str, int] = field(repr=False)

    def __len__(self) -> int:
        return len(self.tokens)

    def __contains__(self, token: str) -> bool:
        return token in self.index

    def lookup(self, token: str) -> int:
        return self.index.get(token, OOV_INDEX)


def build_vocabulary(
    corpus: Iterable[Sequence[str]], max_size: int = 20000, min_count: int = 1
) -> Vocabulary:
    """Build a vocabulary from tokenized documents.

    Tokens are ranked by descending corpus frequency with ties broken by
    first occurrence in corpus order; tokens seen fewer than ``min_count``
    times are dropped, and the top ``max_size - 2`` survivors are admitted
    after the reserved PAD/OOV slots.
    """
    if max_size < 2:
        raise ConfigError(f"max_size must be at least 2 to hold PAD and OOV, got {max_size}")
    if min_count < 1:
        raise ConfigError(f"min_count must be at least 1, got {min_count}")
    counts: Counter[str] = Counter()
    first_seen: dict[str, int] = {}
    for doc in corpus:
        for tok in doc:
            counts[tok] += 1
            if tok not in first_seen:
                first_seen[tok] = len(first_seen)
    admitted = [t for t in counts if counts[t] >= min_count]
    admitted.sort(key=lambda t: (-counts[t], first_seen[t]))
    admitted = admitted[: max_size - 2]
    tokens = (PAD_TOKEN, OOV_TOKEN, *admitted)
    frequencies = (0, 0, *(counts[t] for t in admitted))
    index = {t: i for i, t in enumerate(tokens)}
    return Vocabulary(tokens=tokens, frequencies=frequencies, index=index)


def encode(tokens: Sequence[str], vocab: Vocabulary) -> list[int]:
    """Map tokens to vocabulary indices; unknown tokens become OOV (1)."""
    return [vocab.lookup(t) for t in tokens]


def pad(ids: Sequence[int], maxlen: int) -> list[int]:
    """Force a sequence to exactly ``maxlen``: prepend PAD when short, keep
    the last ``maxlen`` ids when long (so the most recent tokens survive)."""
    if maxlen < 1:
        raise ConfigError(f"maxlen must be positive, got {maxlen}")
    ids = list(ids)
    if len(ids) >= maxlen:
        return ids[len(ids) - maxlen :]
    return [PAD_INDEX] * (maxlen - len(ids)) + ids


class TextEncoder(BaseEstimator, TransformerMixin):
    """Turns raw comments into fixed-length integer sequences.

    fit() normalizes + tokenizes the corpus and builds the vocabulary;
    transform() encodes each text and pre-pads/pre-truncates it to ``maxlen``
    so real tokens always sit at the tail of the row.

    Parameters
    ----------
    maxlen : sequence length in tokens
    vocab_size : vocabulary budget, including the PAD and OOV slots
    min_count : minimum corpus frequency for a token to be admitted
    """

    def __init__(self, maxlen: int = 200, vocab_size: int = 20000, min_count: int = 1):
        self.maxlen = maxlen
        self.vocab_size = vocab_size
        self.min_count = min_count

    def fit(self, texts: Iterable[str], y=None):
        if self.maxlen < 1:
            raise ConfigError(f"maxlen must be positive, got {self.maxlen}")
        corpus = (tokenize(normalize(t)) for t in texts)
        self.vocabulary_ = build_vocabulary(corpus, self.vocab_size, self.min_count)
        return self

    def transform(self, texts: Iterable[str]) -> np.ndarray:
        if not hasattr(self, "vocabulary_"):
            raise NotFittedError("TextEncoder must be fitted before transform")
        rows = [
            pad(encode(tokenize(normalize(t)), self.vocabulary_), self.maxlen)
            for t in texts
        ]
        return np.asarray(rows, dtype=np.int32).reshape(len(rows), self.maxlen)
