"""Command-line interface: preprocess, train, evaluate, predict, gridsearch.

Every subcommand is a thin shell over library calls. Exit codes: 0 success,
1 usage error, 2 data/format error; all errors are a single ``error: ...``
line on stderr.
"""

import argparse
import json
import math
import sys

from sklearn.base import clone

from .data import load_dataset
from .embeddings import build_matrix, load_embeddings, random_matrix
from .errors import ConfigError, DataError, ToxdetectError
from .labels import LABELS
from .metrics import accuracy, evaluate_probabilities, mean_columnwise_auc
from .models import CnnClassifier, LstmClassifier
from .naive_bayes import NaiveBayesClassifier
from .persistence import load_corpus, load_model, save_corpus, save_model
from .pipeline import encode_corpus, train_nb, train_neural
from .tfidf import TfidfVectorizer
from .tuning import grid_search


class _Parser(argparse.ArgumentParser):
    """argparse variant that reports usage problems as exit code 1."""

    def error(self, message):
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(1)


def percent(p: float) -> int:
    """Probability as an integer percentage, .5 rounding up."""
    return int(math.floor(100.0 * p + 0.5))


def _format_prediction_table(texts, probs) -> str:
    cells = [[""] + list(texts)]
    for j, label in enumerate(LABELS):
        cells.append([label] + [f"{percent(probs[i, j])}%" for i in range(len(texts))])
    widths = [max(len(row[c]) for row in cells) for c in range(len(cells[0]))]
    return "\n".join(
        "  ".join(row[c].ljust(widths[c]) for c in range(len(row))).rstrip() for row in cells
    )


def _cmd_preprocess(args) -> int:
    comments = load_dataset(args.input, expect_labels=not args.no_labels)
    corpus = encode_corpus(
        comments, maxlen=args.maxlen, vocab_size=args.vocab_size, min_count=args.min_count
    )
    save_corpus(corpus, args.out)
    print(
        f"encoded {len(corpus.ids)} comments: maxlen {corpus.maxlen}, "
        f"vocabulary {len(corpus.vocabulary)} tokens"
    )
    return 0


def _load_train_corpus(path):
    corpus = load_corpus(path)
    if corpus.labels is None:
        raise DataError(f"{path}: corpus has no labels")
    return corpus


def _embedding_for(args, vocabulary):
    if args.embedding == "random":
        return random_matrix(vocabulary, dim=args.dim, seed=args.seed)
    if not args.embedding_file:
        raise ConfigError(f"--embedding-file is required with --embedding {args.embedding}")
    fmt = "glove" if args.embedding == "glove" else "fasttext_vec"
    table = load_embeddings(args.embedding_file, fmt)
    matrix = build_matrix(vocabulary, table, seed=args.seed)
    print(f"embedding coverage: {matrix.found}/{matrix.found + matrix.missing} tokens")
    return matrix


def _cmd_train(args) -> int:
    corpus = _load_train_corpus(args.data)
    if args.model == "nb":
        model = train_nb(corpus.texts, corpus.labels, alpha=args.alpha)
    else:
        embedding = _embedding_for(args, corpus.vocabulary)
        model = train_neural(
            args.model,
            corpus,
            embedding,
            epochs=args.epochs,
            batch_size=args.batch,
            learning_rate=args.lr,
            seed=args.seed,
        )
        for stats in model.classifier.history_:
            print(
                f"epoch {stats.epoch}: train loss {stats.train_loss:.4f}  "
                f"val loss {stats.val_loss:.4f}  val accuracy {100 * stats.mean_accuracy:.1f}%"
            )
    save_model(model, args.out)
    print(f"saved {args.model} model to {args.out}")
    return 0


def _cmd_evaluate(args) -> int:
    model = load_model(args.model)
    corpus = _load_train_corpus(args.data)
    probs = model.predict_proba(corpus.texts)
    print(evaluate_probabilities(probs, corpus.labels).format())
    return 0


def _cmd_predict(args) -> int:
    model = load_model(args.model)
    if args.text is not None:
        texts = list(args.text)
    else:
        with open(args.file, encoding="utf-8") as fh:
            texts = [line.rstrip("\n") for line in fh if line.strip()]
    if not texts:
        raise DataError("no comments to score")
    probs = model.predict_proba(texts)
    print(_format_prediction_table(texts, probs))
    return 0


_NB_GRID_KEYS = {"alpha", "ngram_range", "max_features"}


def _nb_trainer(corpus, metric_fn):
    def trainer(config, train_idx, test_idx):
        unknown = set(config) - _NB_GRID_KEYS
        if unknown:
            raise ConfigError(f"unknown nb grid parameter(s): {', '.join(sorted(unknown))}")
        vec = TfidfVectorizer(
            ngram_range=tuple(config.get("ngram_range", (1, 2))),
            max_features=config.get("max_features", 50000),
        )
        clf = NaiveBayesClassifier(alpha=config.get("alpha", 1.0))
        train_texts = [corpus.texts[i] for i in train_idx]
        test_texts = [corpus.texts[i] for i in test_idx]
        clf.fit(vec.fit_transform(train_texts), corpus.labels[train_idx])
        return metric_fn(clf.predict_proba(vec.transform(test_texts)), corpus.labels[test_idx])

    return trainer


def _neural_trainer(kind, corpus, metric_fn, args):
    base_cls = CnnClassifier if kind == "cnn" else LstmClassifier
    base = base_cls(
        vocab_size=len(corpus.vocabulary),
        embedding_dim=args.dim,
        epochs=args.epochs,
        batch_size=args.batch,
        seed=args.seed,
    )
    valid = set(base.get_params())

    def trainer(config, train_idx, test_idx):
        unknown = set(config) - valid
        if unknown:
            raise ConfigError(f"unknown {kind} grid parameter(s): {', '.join(sorted(unknown))}")
        clf = clone(base).set_params(**config)
        clf.fit(corpus.sequences[train_idx], corpus.labels[train_idx])
        return metric_fn(clf.predict_proba(corpus.sequences[test_idx]), corpus.labels[test_idx])

    return trainer


def _cmd_gridsearch(args) -> int:
    with open(args.grid, encoding="utf-8") as fh:
        try:
            grid = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DataError(f"{args.grid}: invalid JSON: {exc}") from None
    if not isinstance(grid, dict):
        raise DataError(f"{args.grid}: grid must be a JSON object of parameter -> value list")
    corpus = _load_train_corpus(args.data)
    if args.metric == "accuracy":
        metric_fn = lambda probs, labels: accuracy(probs, labels)[1]  # noqa: E731
    else:
        metric_fn = mean_columnwise_auc
    if args.model == "nb":
        trainer = _nb_trainer(corpus, metric_fn)
    else:
        trainer = _neural_trainer(args.model, corpus, metric_fn, args)
    result = grid_search(grid, trainer, len(corpus.ids), folds=args.folds, seed=args.seed)
    result.write_csv(args.out)
    best = result.best()
    print(f"wrote {len(result.rows)} configurations to {args.out}")
    print(f"best (rank 1): config {best.config_id} {best.params} {args.metric} {best.metric:.6f}")
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(prog="toxdetect", description="Multi-label toxic comment classification.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("preprocess", help="encode a comment CSV into a corpus file")
    p.add_argument("--in", dest="input", required=True, metavar="CSV")
    p.add_argument("--out", required=True, metavar="CORPUS")
    p.add_argument("--maxlen", type=int, default=200)
    p.add_argument("--vocab-size", type=int, default=20000)
    p.add_argument("--min-count", type=int, default=1)
    p.add_argument("--no-labels", action="store_true", help="the CSV has no label columns")
    p.set_defaults(func=_cmd_preprocess)

    p = sub.add_parser("train", help="train a model on a preprocessed corpus")
    p.add_argument("--model", required=True, choices=("nb", "cnn", "lstm"))
    p.add_argument("--data", required=True, metavar="CORPUS")
    p.add_argument("--out", required=True, metavar="MODEL")
    p.add_argument("--embedding", choices=("glove", "fasttext", "random"), default="random")
    p.add_argument("--embedding-file", metavar="VECFILE")
    p.add_argument("--dim", type=int, default=50, help="dimension for random embeddings")
    p.add_argument("--epochs", type=int, default=5)
    p.add_argument("--batch", type=int, default=32)
    p.add_argument("--lr", type=float, default=1e-3)
    p.add_argument("--alpha", type=float, default=1.0, help="NB smoothing")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("evaluate", help="report accuracy and ROC AUC on a labeled corpus")
    p.add_argument("--model", required=True, metavar="MODEL")
    p.add_argument("--data", required=True, metavar="CORPUS")
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("predict", help="score comments and print a percentage table")
    p.add_argument("--model", required=True, metavar="MODEL")
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--text", action="append", metavar="COMMENT")
    source.add_argument("--file", metavar="TXT", help="one comment per line")
    p.set_defaults(func=_cmd_predict)

    p = sub.add_parser("gridsearch", help="exhaustive hyperparameter search")
    p.add_argument("--model", required=True, choices=("nb", "cnn", "lstm"))
    p.add_argument("--grid", required=True, metavar="JSON")
    p.add_argument("--data", required=True, metavar="CORPUS")
    p.add_argument("--out", required=True, metavar="CSV")
    p.add_argument("--folds", type=int, default=3)
    p.add_argument("--metric", choices=("accuracy", "auc"), default="accuracy")
    p.add_argument("--dim", type=int, default=50)
    p.add_argument("--epochs", type=int, default=5)
    p.add_argument("--batch", type=int, default=32)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_gridsearch)

    return parser


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:  # argparse already printed the message
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ToxdetectError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
