"""Evaluation metrics: per-label accuracy and rank-based ROC AUC."""

from dataclasses import dataclass

import numpy as np

from .errors import MetricError, ShapeError
from .labels import LABELS, NUM_LABELS


def accuracy(probs, labels, threshold: float = 0.5):
    """Fraction of correct thresholded predictions per label column.

    A probability >= threshold counts as positive. Returns (per_label, mean)
    where per_label has one entry per column.
    """
    probs = np.asarray(probs, dtype=np.float64)
    labels = np.asarray(labels)
    if probs.ndim != 2 or probs.shape != labels.shape:
        raise ShapeError(f"accuracy: probs {probs.shape} and labels {labels.shape} must match")
    if probs.shape[0] == 0:
        raise MetricError("accuracy needs at least one example")
    correct = (probs >= threshold) == (labels == 1)
    per_label = correct.mean(axis=0)
    return tuple(float(a) for a in per_label), float(per_label.mean())


def _average_ranks(x: np.ndarray) -> np.ndarray:
    """1-based ranks; tied values share the average rank of their span."""
    order = np.argsort(x, kind="stable")
    sx = x[order]
    ranks = np.empty(len(x))
    i = 0
    while i < len(x):
        j = i
        while j + 1 < len(x) and sx[j + 1] == sx[i]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def roc_auc(scores, labels):
    """ROC AUC via the Mann-Whitney rank statistic.

    With R+ the rank sum of the positives (average ranks on ties):

        AUC = (R+ - n_pos (n_pos + 1) / 2) / (n_pos * n_neg)

    equal to the probability that a random positive outranks a random
    negative, ties counting half. Returns None when only one class is
    present (the statistic is undefined, not an error).
    """
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels)
    if scores.ndim != 1 or scores.shape != labels.shape:
        raise ShapeError(f"roc_auc: scores {scores.shape} and labels {labels.shape} must match")
    if scores.shape[0] == 0:
        raise MetricError("roc_auc needs at least one example")
    pos = labels == 1
    n_pos = int(pos.sum())
    n_neg = len(labels) - n_pos
    if n_pos == 0 or n_neg == 0:
        return None
    r_pos = _average_ranks(scores)[pos].sum()
    return float((r_pos - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg))


def mean_columnwise_auc(probs, labels):
    """Mean of the per-column AUCs, skipping single-class (undefined) columns.

    Raises MetricError when every column is undefined.
    """
    probs = np.asarray(probs, dtype=np.float64)
    labels = np.asarray(labels)
    if probs.ndim != 2 or probs.shape != labels.shape:
        raise ShapeError(f"mean_columnwise_auc: probs {probs.shape} and labels {labels.shape} must match")
    defined = [
        a
        for a in (roc_auc(probs[:, j], labels[:, j]) for j in range(probs.shape[1]))
        if a is not None
    ]
    if not defined:
        raise MetricError("ROC AUC is undefined for every column (single-class labels)")
    return sum(defined) / len(defined)


@dataclass(frozen=True)
class MetricReport:
    """Per-label and aggregate metrics for one evaluation run."""

    n_examples: int
    label_accuracy: tuple[float, ...]
    mean_accuracy: float
    label_auc: tuple[float | None, ...]
    mean_auc: float | None
    skipped_labels: tuple[str, ...]

    def format(self) -> str:
        width = max(len(name) for name in LABELS)
        lines = [f"examples: {self.n_examples}"]
        for j, name in enumerate(LABELS):
            auc = "n/a" if self.label_auc[j] is None else f"{self.label_auc[j]:.4f}"
            lines.append(
                f"{name:<{width}}  accuracy {100.0 * self.label_accuracy[j]:5.1f}%  AUC {auc}"
            )
        lines.append(f"mean accuracy {100.0 * self.mean_accuracy:.1f}%")
        if self.mean_auc is None:
            lines.append("mean column-wise AUC n/a (all columns single-class)")
        else:
            mean_line = f"mean column-wise AUC {self.mean_auc:.4f}"
            if self.skipped_labels:
                mean_line += f" (skipped single-class columns: {', '.join(self.skipped_labels)})"
            lines.append(mean_line)
        return "\n".join(lines)


def evaluate_probabilities(probs, labels, threshold: float = 0.5) -> MetricReport:
    """Bundle accuracy and AUC for a (N, 6) probability matrix into a report."""
    probs = np.asarray(probs, dtype=np.float64)
    labels = np.asarray(labels)
    if probs.ndim != 2 or probs.shape[1] != NUM_LABELS or probs.shape != labels.shape:
        raise ShapeError(
            f"evaluate: expected matching (N, {NUM_LABELS}) arrays, got {probs.shape} and {labels.shape}"
        )
    per_label_acc, mean_acc = accuracy(probs, labels, threshold)
    per_label_auc = tuple(roc_auc(probs[:, j], labels[:, j]) for j in range(NUM_LABELS))
    defined = [a for a in per_label_auc if a is not None]
    skipped = tuple(LABELS[j] for j in range(NUM_LABELS) if per_label_auc[j] is None)
    mean_auc = sum(defined) / len(defined) if defined else None
    return MetricReport(
        n_examples=probs.shape[0],
        label_accuracy=per_label_acc,
        mean_accuracy=mean_acc,
        label_auc=per_label_auc,
        mean_auc=mean_auc,
        skipped_labels=skipped,
    )
