"""L2-regularized logistic regression via full-batch gradient descent.

Training starts from zero weights and is fully deterministic, so equal
data and hyperparameters reproduce equal models byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


def sigmoid(z):
    return 1.0 / (1.0 + np.exp(-z))


def log_loss(w: np.ndarray, b: float, X: np.ndarray, y: np.ndarray, l2: float) -> float:
    """Mean log-loss plus (l2/2)*||w||^2; the bias is not regularized."""
    z = X @ w + b
    # log(1 + e^z) - y*z, computed stably
    per_row = np.logaddexp(0.0, z) - y * z
    return float(per_row.mean() + 0.5 * l2 * (w @ w))


def log_loss_gradient(w: np.ndarray, b: float, X: np.ndarray, y: np.ndarray,
                      l2: float) -> tuple[np.ndarray, float]:
    n = X.shape[0]
    residual = sigmoid(X @ w + b) - y
    grad_w = X.T @ residual / n + l2 * w
    grad_b = float(residual.mean())
    return grad_w, grad_b


@dataclass
class LogisticModel:
    kind = "logistic"
    weights: list[float]  # one per feature, canonical order
    bias: float
    feature_schema_version: int = 1
    metadata: dict = field(default_factory=dict)

    def predict_row(self, values: tuple[int, ...]) -> tuple[int, float]:
        z = self.bias + sum(w * v for w, v in zip(self.weights, values))
        score = float(sigmoid(np.float64(z)))
        return (1 if score >= 0.5 else 0), score

    def params(self) -> dict:
        return {"weights": self.weights, "bias": self.bias}

    @classmethod
    def from_params(cls, params: dict, metadata: dict) -> "LogisticModel":
        return cls(weights=list(params["weights"]), bias=params["bias"], metadata=metadata)


def fit_logistic(X_rows: list[tuple[int, ...]], y_rows: list[int],
                 learning_rate: float = 0.1, l2: float = 1e-4,
                 epochs: int = 500) -> LogisticModel:
    X = np.asarray(X_rows, dtype=np.float64)
    y = np.asarray(y_rows, dtype=np.float64)
    w = np.zeros(X.shape[1], dtype=np.float64)
    b = 0.0
    for _ in range(epochs):
        grad_w, grad_b = log_loss_gradient(w, b, X, y, l2)
        w -= learning_rate * grad_w
        b -= learning_rate * grad_b
    return LogisticModel(weights=[float(v) for v in w], bias=float(b))
