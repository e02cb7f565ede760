"""Multi-label toxic comment classification from scratch.

Text normalization, TF-IDF, a multinomial naive Bayes baseline, and small
CNN / LSTM sequence classifiers with hand-written backpropagation, plus a
binary persistence format and a CLI (``python -m toxdetect``).
"""

from .data import LabeledComment, load_dataset, write_dataset
from .embeddings import (
    EmbeddingMatrix,
    EmbeddingTable,
    build_matrix,
    load_embeddings,
    random_matrix,
    save_embeddings,
)
from .errors import (
    ConfigError,
    DataError,
    FitError,
    FormatError,
    IntegrityError,
    MetricError,
    NumericError,
    ParseError,
    SchemaError,
    ShapeError,
    ToxdetectError,
)
from .labels import LABELS, NUM_LABELS
from .metrics import MetricReport, accuracy, evaluate_probabilities, mean_columnwise_auc, roc_auc
from .models import CnnClassifier, EpochStats, LstmClassifier
from .naive_bayes import NaiveBayesClassifier
from .persistence import load_corpus, load_model, read_container, save_corpus, save_model, write_container
from .pipeline import EncodedCorpus, ToxicityModel, encode_corpus, train_nb, train_neural
from .text import TextEncoder, Vocabulary, build_vocabulary, encode, normalize, pad, tokenize
from .tfidf import SparseVector, TfidfVectorizer, ngrams
from .tuning import GridResult, GridRow, grid_search, make_folds

__version__ = "0.1.0"

__all__ = [
    "CnnClassifier",
    "ConfigError",
    "DataError",
    "EmbeddingMatrix",
    "EmbeddingTable",
    "EncodedCorpus",
    "EpochStats",
    "FitError",
    "FormatError",
    "GridResult",
    "GridRow",
    "IntegrityError",
    "LABELS",
    "LabeledComment",
    "LstmClassifier",
    "MetricError",
    "MetricReport",
    "NUM_LABELS",
    "NaiveBayesClassifier",
    "NumericError",
    "ParseError",
    "SchemaError",
    "ShapeError",
    "SparseVector",
    "TextEncoder",
    "TfidfVectorizer",
    "ToxdetectError",
    "ToxicityModel",
    "Vocabulary",
    "accuracy",
    "build_matrix",
    "build_vocabulary",
    "encode",
    "encode_corpus",
    "evaluate_probabilities",
    "grid_search",
    "load_corpus",
    "load_dataset",
    "load_embeddings",
    "load_model",
    "make_folds",
    "mean_columnwise_auc",
    "ngrams",
    "normalize",
    "pad",
    "random_matrix",
    "read_container",
    "roc_auc",
    "save_corpus",
    "save_embeddings",
    "save_model",
    "tokenize",
    "train_nb",
    "train_neural",
    "write_container",
    "write_dataset",
]
