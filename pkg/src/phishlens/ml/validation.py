"""Stratified k-fold cross-validation and grid search."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

from ..dataset import FeatureRow
from .metrics import Metrics, metrics_from_predictions

KFold = tuple[list[int], list[int]]  # (train indices, test indices)


def k_fold_split(labels: list[int], k: int = 10, seed: int = 0) -> list[KFold]:
    """Partition indices into k folds, stratified by label.

    Fold sizes differ by at most one; within each class the spread across
    folds also differs by at most one. Deterministic under the seed.
    """
    import random

    rng = random.Random(seed)
    by_class: dict[int, list[int]] = {}
    for i, label in enumerate(labels):
        by_class.setdefault(label, []).append(i)

    fold_of = [0] * len(labels)
    cursor = 0  # continues across classes so overall sizes stay balanced
    for label in sorted(by_class):
        indices = by_class[label]
        rng.shuffle(indices)
        for i in indices:
            fold_of[i] = cursor % k
            cursor += 1

    folds = []
    for f in range(k):
        test = [i for i in range(len(labels)) if fold_of[i] == f]
        train = [i for i in range(len(labels)) if fold_of[i] != f]
        folds.append((train, test))
    return folds


def cross_validate(rows: list[FeatureRow], cfg, k: int = 10) -> list[Metrics]:
    """Per-fold test metrics for one configuration; empty folds are skipped."""
    from . import predict_values, train

    labels = [row.label for row in rows]
    out = []
    for train_idx, test_idx in k_fold_split(labels, k=k, seed=cfg.seed):
        if not test_idx or not train_idx:
            continue
        train_rows = [rows[i] for i in train_idx]
        if len({row.label for row in train_rows}) < 2:
            continue
        model = train(train_rows, cfg)
        y_true = [rows[i].label for i in test_idx]
        y_pred = [predict_values(model, rows[i].values)[0] for i in test_idx]
        out.append(metrics_from_predictions(y_true, y_pred))
    return out


def _mean(values: list[float]) -> float:
    return sum(values) / len(values) if values else 0.0


def _std(values: list[float]) -> float:
    if not values:
        return 0.0
    m = _mean(values)
    return math.sqrt(sum((v - m) ** 2 for v in values) / len(values))


@dataclass
class GridPoint:
    params: dict
    fold_metrics: list[Metrics] = field(default_factory=list)

    def mean(self, attr: str) -> float:
        return _mean([getattr(m, attr) for m in self.fold_metrics])

    def std(self, attr: str) -> float:
        return _std([getattr(m, attr) for m in self.fold_metrics])


@dataclass
class GridSearchResult:
    best_cfg: "TrainConfig"
    table: list[GridPoint]


DEFAULT_GRIDS = {
    "random_forest": {"n_trees": [50, 100, 200], "max_depth": [8, 16, None]},
    "logistic": {"learning_rate": [0.03, 0.1, 0.3], "l2": [0.0, 1e-3]},
    "naive_bayes": {"smoothing": [0.5, 1.0, 2.0]},
}


def expand_grid(grid: dict[str, list]) -> list[dict]:
    """Every grid point in first-in-grid order (keys then listed values)."""
    if not grid:
        return [{}]
    keys = list(grid)
    return [dict(zip(keys, combo)) for combo in itertools.product(*(grid[k] for k in keys))]


def grid_search(rows: list[FeatureRow], kind: str,
                grid: dict[str, list] | None = None,
                k: int = 10, seed: int = 0) -> GridSearchResult:
    """Evaluate every grid point by mean CV accuracy.

    Ties break by higher mean F1, then by first-in-grid order.
    """
    from . import TrainConfig

    grid = grid if grid is not None else DEFAULT_GRIDS[kind]
    points = expand_grid(grid)
    table: list[GridPoint] = []
    best: GridPoint | None = None
    best_cfg = None
    for params in points:
        cfg = TrainConfig(model_kind=kind, seed=seed, hyperparams=params)
        point = GridPoint(params=params, fold_metrics=cross_validate(rows, cfg, k=k))
        table.append(point)
        if best is None or (point.mean("accuracy"), point.mean("f1")) > (
                best.mean("accuracy"), best.mean("f1")):
            best = point
            best_cfg = cfg
    return GridSearchResult(best_cfg=best_cfg, table=table)
