"""Single-file binary container for trained models and preprocessed corpora.

Byte layout (all integers little-endian):

    offset 0   magic           6 bytes, b"TOXMDL"
    offset 6   format version  u16 (currently 1)
    offset 8   metadata length u64
    offset 16  metadata        UTF-8 JSON document
    ...        array count     u32 (must equal the metadata manifest length)
    per array  name length     u16
               name            UTF-8 bytes
               dtype code      u8: 1 = float32, 2 = float64, 3 = int32
               ndim            u8
               dims            ndim * u32
               data            raw C-order little-endian values

The metadata JSON always contains "kind" ("nb" | "cnn" | "lstm" | "corpus"),
"labels" (the canonical label order), and an "arrays" manifest of
{name, dtype, shape} entries that load cross-checks against the payload;
any disagreement, truncation or trailing garbage raises IntegrityError.

Neural weights are stored float32 (their native training precision, so a
round-trip reproduces predictions bit-exactly); Naive Bayes log tables are
stored float64 for the same reason; sequence data is int32.
"""

import json
import struct

import numpy as np

from .errors import FormatError, IntegrityError
from .labels import LABELS
from .models import CnnClassifier, LstmClassifier
from .naive_bayes import NaiveBayesClassifier
from .pipeline import EncodedCorpus, ToxicityModel, encoder_for
from .text import Vocabulary
from .tfidf import TfidfVectorizer

MAGIC = b"TOXMDL"
VERSION = 1
_DTYPES = {1: np.dtype("<f4"), 2: np.dtype("<f8"), 3: np.dtype("<i4")}
_NAMES = {1: "f4", 2: "f8", 3: "i4"}
_CODES = {name: code for code, name in _NAMES.items()}


def _code_for(arr: np.ndarray) -> int:
    dt = arr.dtype.newbyteorder("<")
    for code, want in _DTYPES.items():
        if dt == want:
            return code
    raise FormatError(f"unsupported array dtype {arr.dtype}; cast to f4, f8 or i4 first")


def write_container(path, metadata: dict, arrays: dict[str, np.ndarray]) -> None:
    """Serialize metadata + named arrays; byte-deterministic for equal inputs."""
    manifest = []
    encoded = []
    for name, arr in arrays.items():
        arr = np.ascontiguousarray(arr)
        code = _code_for(arr)
        manifest.append({"name": name, "dtype": _NAMES[code], "shape": list(arr.shape)})
        encoded.append((name, code, arr.astype(_DTYPES[code], copy=False)))
    meta = dict(metadata)
    meta["arrays"] = manifest
    blob = json.dumps(meta, sort_keys=True, separators=(",", ":")).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<H", VERSION))
        fh.write(struct.pack("<Q", len(blob)))
        fh.write(blob)
        fh.write(struct.pack("<I", len(encoded)))
        for name, code, arr in encoded:
            raw = name.encode("utf-8")
            fh.write(struct.pack("<H", len(raw)))
            fh.write(raw)
            fh.write(struct.pack("<BB", code, arr.ndim))
            fh.write(struct.pack(f"<{arr.ndim}I", *arr.shape))
            fh.write(arr.tobytes())


class _Reader:
    def __init__(self, data: bytes, path):
        self.data, self.off, self.path = data, 0, path

    def take(self, n: int) -> bytes:
        if self.off + n > len(self.data):
            raise IntegrityError(f"{self.path}: truncated file (wanted {n} bytes at offset {self.off})")
        chunk = self.data[self.off : self.off + n]
        self.off += n
        return chunk

    def unpack(self, fmt: str):
        return struct.unpack(fmt, self.take(struct.calcsize(fmt)))


def read_container(path) -> tuple[dict, dict[str, np.ndarray]]:
    """Inverse of write_container, with integrity checking throughout."""
    with open(path, "rb") as fh:
        reader = _Reader(fh.read(), path)
    if reader.take(len(MAGIC)) != MAGIC:
        raise FormatError(f"{path}: not a toxdetect container (bad magic)")
    (version,) = reader.unpack("<H")
    if version != VERSION:
        raise FormatError(f"{path}: unsupported format version {version} (expected {VERSION})")
    (meta_len,) = reader.unpack("<Q")
    try:
        meta = json.loads(reader.take(meta_len).decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise IntegrityError(f"{path}: corrupt metadata: {exc}") from None
    manifest = meta.get("arrays")
    if not isinstance(manifest, list):
        raise IntegrityError(f"{path}: metadata lacks an arrays manifest")
    (count,) = reader.unpack("<I")
    if count != len(manifest):
        raise IntegrityError(
            f"{path}: payload declares {count} arrays, manifest lists {len(manifest)}"
        )
    arrays = {}
    for entry in manifest:
        (name_len,) = reader.unpack("<H")
        name = reader.take(name_len).decode("utf-8")
        code, ndim = reader.unpack("<BB")
        if code not in _DTYPES:
            raise IntegrityError(f"{path}: array {name!r}: unknown dtype code {code}")
        shape = reader.unpack(f"<{ndim}I")
        if (
            name != entry.get("name")
            or _NAMES[code] != entry.get("dtype")
            or list(shape) != entry.get("shape")
        ):
            raise IntegrityError(f"{path}: array {name!r} does not match the manifest entry {entry}")
        n_items = int(np.prod(shape, dtype=np.int64)) if shape else 1
        raw = reader.take(n_items * _DTYPES[code].itemsize)
        arrays[name] = np.frombuffer(raw, dtype=_DTYPES[code]).reshape(shape).copy()
    if reader.off != len(reader.data):
        raise IntegrityError(f"{path}: {len(reader.data) - reader.off} bytes of trailing data")
    return meta, arrays


def _check_labels(meta: dict, path) -> None:
    if tuple(meta.get("labels", ())) != LABELS:
        raise FormatError(f"{path}: label order {meta.get('labels')!r} does not match {list(LABELS)}")


# -- models -----------------------------------------------------------------


def save_model(model: ToxicityModel, path) -> None:
    """Write a ToxicityModel to a single container file."""
    meta: dict = {"kind": model.kind, "labels": list(LABELS)}
    if model.kind == "nb":
        vec, clf = model.vectorizer, model.classifier
        meta["tfidf"] = {
            "ngram_range": list(vec.ngram_range),
            "max_features": vec.max_features,
            "n_docs": vec.n_docs_,
            "feature_names": vec.feature_names_,
        }
        meta["alpha"] = clf.alpha
        arrays = {
            "idf": vec.idf_.astype("<f8"),
            "class_log_prior": clf.class_log_prior_.astype("<f8"),
            "feature_log_likelihood": clf.feature_log_likelihood_.astype("<f8"),
            "class_count": clf.class_count_.astype("<f8"),
        }
    elif model.kind in ("cnn", "lstm"):
        enc, clf = model.encoder, model.classifier
        meta["encoder"] = {"maxlen": enc.maxlen, "min_count": enc.min_count}
        meta["vocabulary"] = {
            "tokens": list(enc.vocabulary_.tokens),
            "frequencies": list(enc.vocabulary_.frequencies),
        }
        config = {
            "trainable_embedding": clf.trainable_embedding,
            "epochs": clf.epochs,
            "batch_size": clf.batch_size,
            "learning_rate": clf.learning_rate,
            "validation_fraction": clf.validation_fraction,
            "seed": clf.seed,
        }
        if model.kind == "cnn":
            config.update(
                filters=clf.filters, kernel_size=clf.kernel_size, dense_units=clf.dense_units
            )
        else:
            config["hidden_units"] = clf.hidden_units
        meta["config"] = config
        if model.embedding_coverage is not None:
            found, missing = model.embedding_coverage
            meta["embedding_coverage"] = {"found": found, "missing": missing}
        arrays = {name: arr.astype("<f4") for name, arr in clf.weights().items()}
    else:
        raise FormatError(f"cannot save model of kind {model.kind!r}")
    write_container(path, meta, arrays)


def load_model(path) -> ToxicityModel:
    """Read a container written by save_model back into a usable model."""
    meta, arrays = read_container(path)
    kind = meta.get("kind")
    _check_labels(meta, path)
    if kind == "nb":
        tf = meta["tfidf"]
        vec = TfidfVectorizer(
            ngram_range=tuple(tf["ngram_range"]), max_features=tf["max_features"]
        )
        vec.feature_names_ = tuple(tf["feature_names"])
        vec.feature_index_ = {g: j for j, g in enumerate(vec.feature_names_)}
        vec.idf_ = arrays["idf"]
        vec.n_docs_ = tf["n_docs"]
        clf = NaiveBayesClassifier(alpha=meta["alpha"])
        clf.feature_log_likelihood_ = arrays["feature_log_likelihood"]
        clf.class_log_prior_ = arrays["class_log_prior"]
        clf.class_count_ = arrays["class_count"]
        clf.n_features_ = len(vec.feature_names_)
        return ToxicityModel(kind="nb", classifier=clf, vectorizer=vec)
    if kind in ("cnn", "lstm"):
        vocab_meta = meta["vocabulary"]
        vocab = _vocabulary_from(vocab_meta)
        enc_meta = meta["encoder"]
        encoder = encoder_for(vocab, enc_meta["maxlen"])
        encoder.min_count = enc_meta["min_count"]
        config = dict(meta["config"])
        emb = arrays["embedding.W"]
        cls = CnnClassifier if kind == "cnn" else LstmClassifier
        clf = cls(embedding=emb, **config)
        clf.initialize()
        clf.set_weights(arrays)
        coverage = meta.get("embedding_coverage")
        return ToxicityModel(
            kind=kind,
            classifier=clf,
            encoder=encoder,
            embedding_coverage=(coverage["found"], coverage["missing"]) if coverage else None,
        )
    raise FormatError(f"{path}: kind {kind!r} is not a model (expected nb, cnn or lstm)")


def _vocabulary_from(vocab_meta: dict) -> Vocabulary:
    tokens = tuple(vocab_meta["tokens"])
    frequencies = tuple(vocab_meta["frequencies"])
    index = {t: i for i, t in enumerate(tokens)}
    return Vocabulary(tokens=tokens, frequencies=frequencies, index=index)


# -- corpora ------------------------------------------------------------------


def save_corpus(corpus: EncodedCorpus, path) -> None:
    """Write an EncodedCorpus to a single container file."""
    meta = {
        "kind": "corpus",
        "labels": list(LABELS),
        "maxlen": corpus.maxlen,
        "ids": corpus.ids,
        "texts": corpus.texts,
        "vocabulary": {
            "tokens": list(corpus.vocabulary.tokens),
            "frequencies": list(corpus.vocabulary.frequencies),
        },
        "has_labels": corpus.labels is not None,
    }
    arrays = {"sequences": corpus.sequences.astype("<i4")}
    if corpus.labels is not None:
        arrays["labels"] = corpus.labels.astype("<i4")
    write_container(path, meta, arrays)


def load_corpus(path) -> EncodedCorpus:
    meta, arrays = read_container(path)
    if meta.get("kind") != "corpus":
        raise FormatError(f"{path}: kind {meta.get('kind')!r} is not a corpus")
    _check_labels(meta, path)
    return EncodedCorpus(
        ids=list(meta["ids"]),
        texts=list(meta["texts"]),
        sequences=arrays["sequences"],
        labels=arrays.get("labels") if meta.get("has_labels") else None,
        vocabulary=_vocabulary_from(meta["vocabulary"]),
        maxlen=meta["maxlen"],
    )
