"""Confusion-count metrics with phishing (1) as the positive class."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Metrics:
    accuracy: float
    precision: float
    recall: float
    f1: float
    tp: int
    fp: int
    tn: int
    fn: int

    @property
    def macro_precision(self) -> float:
        return (self.precision + _safe_div(self.tn, self.tn + self.fn)) / 2

    @property
    def macro_recall(self) -> float:
        return (self.recall + _safe_div(self.tn, self.tn + self.fp)) / 2

    @property
    def macro_f1(self) -> float:
        neg_p = _safe_div(self.tn, self.tn + self.fn)
        neg_r = _safe_div(self.tn, self.tn + self.fp)
        neg_f1 = _safe_div(2 * neg_p * neg_r, neg_p + neg_r)
        return (self.f1 + neg_f1) / 2


def _safe_div(num: float, den: float) -> float:
    return num / den if den else 0.0


def metrics_from_counts(tp: int, fp: int, tn: int, fn: int) -> Metrics:
    """All four metrics from a confusion square; zero denominators give 0."""
    accuracy = _safe_div(tp + tn, tp + fp + tn + fn)
    precision = _safe_div(tp, tp + fp)
    recall = _safe_div(tp, tp + fn)
    f1 = _safe_div(2 * precision * recall, precision + recall)
    return Metrics(accuracy=accuracy, precision=precision, recall=recall, f1=f1,
                   tp=tp, fp=fp, tn=tn, fn=fn)


def metrics_from_predictions(y_true, y_pred) -> Metrics:
    tp = fp = tn = fn = 0
    for truth, pred in zip(y_true, y_pred):
        if pred == 1:
            if truth == 1:
                tp += 1
            else:
                fp += 1
        else:
            if truth == 1:
                fn += 1
            else:
                tn += 1
    return metrics_from_counts(tp, fp, tn, fn)
