"""Native classifiers (Naive Bayes, logistic regression, random forest)
with shared train/predict/evaluate entry points."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from ..dataset import FEATURE_SCHEMA_VERSION, FeatureRow, validate_values
from ..errors import SchemaMismatch, SingleClassData, UnlabeledRow
from .forest import RandomForestModel, fit_forest
from .logistic import LogisticModel, fit_logistic
from .metrics import Metrics, metrics_from_counts, metrics_from_predictions
from .naive_bayes import NaiveBayesModel, fit_naive_bayes
from .storage import load_model, save_model
from .validation import (
    DEFAULT_GRIDS,
    GridPoint,
    GridSearchResult,
    cross_validate,
    grid_search,
    k_fold_split,
)

TrainedModel = Union[NaiveBayesModel, LogisticModel, RandomForestModel]

MODEL_KINDS = ("naive_bayes", "logistic", "random_forest")

DEFAULT_HYPERPARAMS = {
    "naive_bayes": {"smoothing": 1.0},
    "logistic": {"learning_rate": 0.15, "l2": 3e-4, "epochs": 2000},
    "random_forest": {"n_trees": 100, "max_depth": None,
                      "min_samples_split": 2, "features_per_split": 5},
}


@dataclass
class TrainConfig:
    model_kind: str
    seed: int = 0
    hyperparams: dict = field(default_factory=dict)

    def resolved(self) -> dict:
        merged = dict(DEFAULT_HYPERPARAMS[self.model_kind])
        merged.update(self.hyperparams)
        self._check(merged)
        return merged

    def _check(self, hp: dict) -> None:
        if self.model_kind == "random_forest" and hp["n_trees"] < 1:
            raise ValueError("n_trees must be >= 1")
        if self.model_kind == "logistic" and hp["learning_rate"] <= 0:
            raise ValueError("learning_rate must be > 0")
        if self.model_kind == "naive_bayes" and hp["smoothing"] <= 0:
            raise ValueError("smoothing must be > 0")


def train(rows: list[FeatureRow], cfg: TrainConfig) -> TrainedModel:
    """Fit one model; deterministic given (rows, cfg)."""
    if len(rows) < 2:
        raise SingleClassData("need at least two labeled rows")
    for row in rows:
        if row.label is None:
            raise UnlabeledRow(f"row for {row.url!r} has no label")
        validate_values(row.values)
    labels = {row.label for row in rows}
    if labels != {0, 1}:
        raise SingleClassData(f"training data contains classes {sorted(labels)}")

    X = [row.values for row in rows]
    y = [row.label for row in rows]
    hp = cfg.resolved()
    if cfg.model_kind == "naive_bayes":
        model = fit_naive_bayes(X, y, smoothing=hp["smoothing"])
    elif cfg.model_kind == "logistic":
        model = fit_logistic(X, y, learning_rate=hp["learning_rate"],
                             l2=hp["l2"], epochs=int(hp["epochs"]))
    elif cfg.model_kind == "random_forest":
        model = fit_forest(
            X, y, seed=cfg.seed,
            n_trees=int(hp["n_trees"]),
            max_depth=None if hp["max_depth"] is None else int(hp["max_depth"]),
            min_samples_split=int(hp["min_samples_split"]),
            features_per_split=int(hp["features_per_split"]),
        )
    else:
        raise ValueError(f"unknown model kind {cfg.model_kind!r}")

    train_metrics = metrics_from_predictions(
        y, [model.predict_row(values)[0] for values in X])
    model.metadata = {
        "seed": cfg.seed,
        "model_kind": cfg.model_kind,
        "hyperparams": {k: hp[k] for k in sorted(hp)},
        "n_rows": len(rows),
        "train_metrics": {
            "accuracy": train_metrics.accuracy,
            "precision": train_metrics.precision,
            "recall": train_metrics.recall,
            "f1": train_metrics.f1,
        },
    }
    return model


def predict_values(model: TrainedModel, values: tuple[int, ...]) -> tuple[int, float]:
    if len(values) != 23:
        raise SchemaMismatch(f"expected 23 features, got {len(values)}")
    if model.feature_schema_version != FEATURE_SCHEMA_VERSION:
        raise SchemaMismatch(
            f"model schema v{model.feature_schema_version} does not match "
            f"current v{FEATURE_SCHEMA_VERSION}")
    return model.predict_row(tuple(values))


def predict(model: TrainedModel, row: FeatureRow) -> tuple[int, float]:
    """(class, phishing score) for one row; class is 1 iff score >= 0.5."""
    return predict_values(model, row.values)


def evaluate(model: TrainedModel, rows: list[FeatureRow]) -> Metrics:
    """Confusion-count metrics of the model over labeled rows."""
    y_true = [row.label for row in rows]
    y_pred = [predict(model, row)[0] for row in rows]
    return metrics_from_predictions(y_true, y_pred)
