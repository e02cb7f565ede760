"""Exhaustive hyperparameter grid search with cross-validated scoring."""

import csv
import itertools
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError


@dataclass(frozen=True)
class GridRow:
    """One evaluated configuration."""

    config_id: int
    params: dict
    metric: float
    rank: int


@dataclass(frozen=True)
class GridResult:
    """All evaluated configurations, in enumeration order."""

    param_names: tuple[str, ...]
    rows: tuple[GridRow, ...]

    def best(self) -> GridRow:
        return min(self.rows, key=lambda r: r.rank)

    def write_csv(self, path) -> None:
        """Deterministic CSV: header ``config_id,<param names...>,metric,rank``,
        UTF-8, LF line endings; identical bytes for identical inputs."""
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["config_id", *self.param_names, "metric", "rank"])
            for row in self.rows:
                writer.writerow(
                    [row.config_id]
                    + [str(row.params[name]) for name in self.param_names]
                    + [f"{row.metric:.6f}", row.rank]
                )


def make_folds(n: int, folds: int, seed: int = 0) -> list[tuple[np.ndarray, np.ndarray]]:
    """Deterministic (train_idx, test_idx) splits of range(n).

    folds >= 2 partitions a seeded permutation into K contiguous slices;
    folds == 1 is a single 80/20 holdout (the last 20% of the permutation).
    """
    if folds < 1:
        raise ConfigError(f"folds must be >= 1, got {folds}")
    if folds > n:
        raise ConfigError(f"cannot make {folds} folds from {n} examples")
    perm = np.random.default_rng(seed).permutation(n)
    if folds == 1:
        n_test = int(n * 0.2)
        if n_test < 1 or n - n_test < 1:
            raise ConfigError(f"cannot carve an 80/20 holdout out of {n} examples")
        return [(perm[:-n_test], perm[-n_test:])]
    parts = np.array_split(perm, folds)
    splits = []
    for k in range(folds):
        train = np.concatenate([parts[j] for j in range(folds) if j != k])
        splits.append((train, parts[k]))
    return splits


def grid_search(grid: dict, trainer, n_examples: int, folds: int = 3, seed: int = 0) -> GridResult:
    """Score every configuration in the Cartesian product of ``grid``.

    ``trainer(config, train_idx, test_idx) -> float`` trains with the given
    parameter overrides and returns the evaluation metric on the test index
    set; the per-configuration metric is the mean over folds. Ranking is by
    metric descending with ties broken by enumeration order, and enumeration
    follows the dict's insertion order of parameters and values.
    """
    if not grid:
        raise ConfigError("grid must define at least one parameter")
    for name, values in grid.items():
        if not isinstance(values, (list, tuple)) or len(values) == 0:
            raise ConfigError(f"grid parameter {name!r} needs a nonempty list of values")
    splits = make_folds(n_examples, folds, seed)
    names = tuple(grid)
    scored = []
    for config_id, combo in enumerate(itertools.product(*grid.values()), start=1):
        config = dict(zip(names, combo))
        fold_metrics = [trainer(dict(config), train, test) for train, test in splits]
        scored.append((config_id, config, sum(fold_metrics) / len(fold_metrics)))
    by_metric = sorted(range(len(scored)), key=lambda i: (-scored[i][2], scored[i][0]))
    rank_of = {i: rank for rank, i in enumerate(by_metric, start=1)}
    rows = tuple(
        GridRow(config_id=cid, params=config, metric=metric, rank=rank_of[i])
        for i, (cid, config, metric) in enumerate(scored)
    )
    return GridResult(param_names=names, rows=rows)
