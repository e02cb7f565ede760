"""Pretrained word-vector files and vocabulary-aligned embedding matrices.

Two text formats are supported: GloVe (``word v1 ... vd`` per line, dimension
inferred from the first line) and FastText ``.vec`` (same body after a
``count dim`` header line).
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, FormatError, ParseError
from .text import OOV_INDEX, Vocabulary

FORMATS = ("glove", "fasttext_vec")


@dataclass(frozen=True)
class EmbeddingTable:
    """Parsed word -> vector map; every vector has length ``dim``."""

    vectors: dict[str, np.ndarray]
    dim: int

    def __len__(self) -> int:
        return len(self.vectors)

    def __contains__(self, word: str) -> bool:
        return word in self.vectors


@dataclass(frozen=True)
class EmbeddingMatrix:
    """Vocabulary-aligned (V, d) float64 matrix plus coverage counts.

    Row 0 (PAD) is all zeros; ``found + missing`` equals V.
    """

    weights: np.ndarray
    found: int
    missing: int

    @property
    def coverage(self) -> float:
        return self.found / max(self.found + self.missing, 1)


def _parse_vector(path, line_no: int, parts: list[str]) -> np.ndarray:
    try:
        vec = np.array([float(p) for p in parts], dtype=np.float64)
    except ValueError as exc:
        raise ParseError(f"{path}: line {line_no}: {exc}") from None
    if not np.all(np.isfinite(vec)):
        raise ParseError(f"{path}: line {line_no}: non-finite vector component")
    return vec


def load_embeddings(path, fmt: str = "glove") -> EmbeddingTable:
    """Parse a word-vector text file into an EmbeddingTable.

    The first occurrence of a duplicate word wins. A line whose field count
    disagrees with the established dimension raises ParseError with the line
    number; a FastText header that does not validate (two integers; declared
    count matching the number of data lines) raises FormatError.
    """
    if fmt not in FORMATS:
        raise ConfigError(f"unknown embedding format {fmt!r}, expected one of {FORMATS}")
    vectors: dict[str, np.ndarray] = {}
    dim = None
    declared_count = None
    data_lines = 0
    with open(path, encoding="utf-8") as fh:
        lines = enumerate(fh, start=1)
        if fmt == "fasttext_vec":
            first = next(lines, None)
            if first is None:
                raise FormatError(f"{path}: empty file, expected a 'count dim' header")
            _, header = first
            parts = header.split()
            if len(parts) != 2 or not all(p.isdigit() for p in parts):
                raise FormatError(f"{path}: line 1: expected 'count dim' header, got {header.strip()!r}")
            declared_count, dim = int(parts[0]), int(parts[1])
            if dim < 1:
                raise FormatError(f"{path}: line 1: declared dimension must be positive, got {dim}")
        for line_no, line in lines:
            parts = line.split()
            if dim is None:
                if len(parts) < 2:
                    raise ParseError(f"{path}: line {line_no}: expected 'word v1 ... vd', got {len(parts)} fields")
                dim = len(parts) - 1
            if len(parts) != dim + 1:
                raise ParseError(
                    f"{path}: line {line_no}: expected {dim + 1} fields, got {len(parts)}"
                )
            data_lines += 1
            word = parts[0]
            if word not in vectors:
                vectors[word] = _parse_vector(path, line_no, parts[1:])
    if dim is None:
        raise FormatError(f"{path}: no vectors found")
    if declared_count is not None and declared_count != data_lines:
        raise FormatError(
            f"{path}: header declares {declared_count} vectors but the file has {data_lines}"
        )
    return EmbeddingTable(vectors=vectors, dim=dim)


def save_embeddings(table: EmbeddingTable, path) -> None:
    """Write a table in GloVe text format; reloading agrees within 1e-6."""
    with open(path, "w", encoding="utf-8") as fh:
        for word, vec in table.vectors.items():
            fh.write(word + " " + " ".join(f"{v:.8g}" for v in vec) + "\n")


def build_matrix(vocab: Vocabulary, table: EmbeddingTable, seed: int = 0) -> EmbeddingMatrix:
    """Assemble the (V, d) matrix aligned with vocabulary indices.

    Row 0 (PAD) is zeros. A token found in the table gets its vector copied
    verbatim. Every other row, including OOV, is drawn uniform(-0.05, 0.05)
    from a per-row generator seeded by (seed, row), so one row's values do
    not depend on which other rows were found.
    """
    if table.dim < 1:
        raise ConfigError(f"embedding dimension must be positive, got {table.dim}")
    size = len(vocab)
    weights = np.zeros((size, table.dim))
    found = 0
    for i in range(1, size):
        vec = table.vectors.get(vocab.tokens[i]) if i != OOV_INDEX else None
        if vec is not None:
            weights[i] = vec
            found += 1
        else:
            rng = np.random.default_rng((seed, i))
            weights[i] = rng.uniform(-0.05, 0.05, table.dim)
    return EmbeddingMatrix(weights=weights, found=found, missing=size - found)


def random_matrix(vocab: Vocabulary, dim: int = 50, seed: int = 0) -> EmbeddingMatrix:
    """Embedding matrix with no pretrained vectors at all (coverage 0)."""
    return build_matrix(vocab, EmbeddingTable(vectors={}, dim=dim), seed=seed)
