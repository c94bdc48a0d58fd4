"""Categorical Naive Bayes over the discrete feature vocabulary.

The feature values are ternary/binary categories plus one count (URL
depth), which is bucketed into {0, 1, 2, 3+}. Likelihoods use additive
smoothing; posteriors are computed in log space and normalized so the two
class scores sum to one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..dataset import COUNT_FEATURES, FEATURE_NAMES, feature_domain

DEPTH_BUCKETS = (0, 1, 2, 3)  # last bucket absorbs everything >= 3


def _domain_for(index: int) -> tuple[int, ...]:
    name = FEATURE_NAMES[index]
    if name in COUNT_FEATURES:
        return DEPTH_BUCKETS
    return feature_domain(name)


def _bucket(index: int, value: int) -> int:
    if FEATURE_NAMES[index] in COUNT_FEATURES:
        return min(value, DEPTH_BUCKETS[-1])
    return value


@dataclass
class NaiveBayesModel:
    kind = "naive_bayes"
    smoothing: float
    class_counts: list[int]  # [n_legit, n_phish]
    # likelihoods[f][c][v] = P(feature f takes value v | class c)
    likelihoods: list[list[dict[int, float]]]
    feature_schema_version: int = 1
    metadata: dict = field(default_factory=dict)

    @property
    def priors(self) -> tuple[float, float]:
        total = sum(self.class_counts)
        return self.class_counts[0] / total, self.class_counts[1] / total

    def predict_row(self, values: tuple[int, ...]) -> tuple[int, float]:
        log_post = [math.log(self.class_counts[c] / sum(self.class_counts))
                    for c in (0, 1)]
        for f, value in enumerate(values):
            v = _bucket(f, value)
            for c in (0, 1):
                log_post[c] += math.log(self.likelihoods[f][c][v])
        # normalize: score = P(phish | x), the two scores sum to 1
        m = max(log_post)
        z = sum(math.exp(lp - m) for lp in log_post)
        score = math.exp(log_post[1] - m) / z
        return (1 if score >= 0.5 else 0), score

    def params(self) -> dict:
        return {
            "smoothing": self.smoothing,
            "class_counts": self.class_counts,
            "likelihoods": [
                [{str(v): p for v, p in sorted(cls.items())} for cls in feat]
                for feat in self.likelihoods
            ],
        }

    @classmethod
    def from_params(cls, params: dict, metadata: dict) -> "NaiveBayesModel":
        likelihoods = [
            [{int(v): p for v, p in cls_map.items()} for cls_map in feat]
            for feat in params["likelihoods"]
        ]
        return cls(smoothing=params["smoothing"], class_counts=list(params["class_counts"]),
                   likelihoods=likelihoods, metadata=metadata)


def fit_naive_bayes(X: list[tuple[int, ...]], y: list[int],
                    smoothing: float = 1.0) -> NaiveBayesModel:
    n_features = len(FEATURE_NAMES)
    class_counts = [y.count(0), y.count(1)]
    likelihoods: list[list[dict[int, float]]] = []
    for f in range(n_features):
        domain = _domain_for(f)
        per_class = []
        for c in (0, 1):
            counts = {v: 0 for v in domain}
            for row, label in zip(X, y):
                if label == c:
                    counts[_bucket(f, row[f])] += 1
            denom = class_counts[c] + smoothing * len(domain)
            per_class.append({v: (counts[v] + smoothing) / denom for v in domain})
        likelihoods.append(per_class)
    return NaiveBayesModel(smoothing=smoothing, class_counts=class_counts,
                           likelihoods=likelihoods)
