"""Random forest of CART trees: Gini splits, bootstrap sampling, majority vote.

Per-tree RNG streams are derived from the master seed up front, so a
forest trains to identical parameters no matter how the per-tree work is
scheduled.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field


def gini_of_counts(c0: int, c1: int) -> float:
    n = c0 + c1
    if n == 0:
        return 0.0
    p0 = c0 / n
    p1 = c1 / n
    return 1.0 - p0 * p0 - p1 * p1


def weighted_gini(l0: int, l1: int, r0: int, r1: int) -> float:
    n = l0 + l1 + r0 + r1
    left = l0 + l1
    right = r0 + r1
    return (left / n) * gini_of_counts(l0, l1) + (right / n) * gini_of_counts(r0, r1)


def best_split(X: list[tuple[int, ...]], y: list[int], indices: list[int],
               features: list[int]) -> tuple[int, float, float] | None:
    """Minimum-impurity (feature, threshold, impurity) over the candidates.

    Thresholds are midpoints between consecutive distinct values; rows with
    value <= threshold go left. Ties keep the first candidate in feature
    order, then ascending threshold order. Returns None when every
    candidate feature is constant on the node.
    """
    best: tuple[int, float, float] | None = None
    for f in features:
        values = sorted({X[i][f] for i in indices})
        for j in range(len(values) - 1):
            threshold = (values[j] + values[j + 1]) / 2.0
            l0 = l1 = r0 = r1 = 0
            for i in indices:
                if X[i][f] <= threshold:
                    if y[i] == 1:
                        l1 += 1
                    else:
                        l0 += 1
                else:
                    if y[i] == 1:
                        r1 += 1
                    else:
                        r0 += 1
            impurity = weighted_gini(l0, l1, r0, r1)
            if best is None or impurity < best[2]:
                best = (f, threshold, impurity)
    return best


@dataclass
class TreeNode:
    # leaf when feature is None; internal nodes route value <= threshold left
    feature: int | None = None
    threshold: float | None = None
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None
    counts: tuple[int, int] | None = None  # (legit, phish) rows at a leaf

    def to_dict(self) -> dict:
        if self.feature is None:
            return {"counts": list(self.counts)}
        return {
            "feature": self.feature,
            "threshold": self.threshold,
            "left": self.left.to_dict(),
            "right": self.right.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TreeNode":
        if "counts" in data:
            return cls(counts=tuple(data["counts"]))
        return cls(
            feature=data["feature"],
            threshold=data["threshold"],
            left=cls.from_dict(data["left"]),
            right=cls.from_dict(data["right"]),
        )

    def leaf_class(self) -> int:
        c0, c1 = self.counts
        return 1 if c1 >= c0 else 0  # tie goes to the phishing class

    def route(self, values: tuple[int, ...]) -> int:
        node = self
        while node.feature is not None:
            node = node.left if values[node.feature] <= node.threshold else node.right
        return node.leaf_class()


def grow_tree(X: list[tuple[int, ...]], y: list[int], indices: list[int],
              rng: random.Random, max_depth: int | None,
              min_samples_split: int, features_per_split: int,
              depth: int = 0) -> TreeNode:
    c1 = sum(y[i] for i in indices)
    c0 = len(indices) - c1
    if (
        c0 == 0 or c1 == 0
        or len(indices) < min_samples_split
        or (max_depth is not None and depth >= max_depth)
    ):
        return TreeNode(counts=(c0, c1))

    n_features = len(X[0])
    k = min(features_per_split, n_features)
    features = rng.sample(range(n_features), k)
    split = best_split(X, y, indices, features)
    if split is None:
        return TreeNode(counts=(c0, c1))
    f, threshold, _ = split
    left_idx = [i for i in indices if X[i][f] <= threshold]
    right_idx = [i for i in indices if X[i][f] > threshold]
    return TreeNode(
        feature=f,
        threshold=threshold,
        left=grow_tree(X, y, left_idx, rng, max_depth, min_samples_split,
                       features_per_split, depth + 1),
        right=grow_tree(X, y, right_idx, rng, max_depth, min_samples_split,
                        features_per_split, depth + 1),
    )


@dataclass
class RandomForestModel:
    kind = "random_forest"
    trees: list[TreeNode]
    n_trees: int
    max_depth: int | None
    min_samples_split: int
    features_per_split: int
    feature_schema_version: int = 1
    metadata: dict = field(default_factory=dict)

    def predict_row(self, values: tuple[int, ...]) -> tuple[int, float]:
        votes = sum(tree.route(values) for tree in self.trees)
        score = votes / len(self.trees)
        return (1 if score >= 0.5 else 0), score

    def params(self) -> dict:
        return {
            "n_trees": self.n_trees,
            "max_depth": self.max_depth,
            "min_samples_split": self.min_samples_split,
            "features_per_split": self.features_per_split,
            "trees": [tree.to_dict() for tree in self.trees],
        }

    @classmethod
    def from_params(cls, params: dict, metadata: dict) -> "RandomForestModel":
        return cls(
            trees=[TreeNode.from_dict(t) for t in params["trees"]],
            n_trees=params["n_trees"],
            max_depth=params["max_depth"],
            min_samples_split=params["min_samples_split"],
            features_per_split=params["features_per_split"],
            metadata=metadata,
        )


def fit_forest(X: list[tuple[int, ...]], y: list[int], seed: int,
               n_trees: int = 100, max_depth: int | None = None,
               min_samples_split: int = 2,
               features_per_split: int = 5) -> RandomForestModel:
    master = random.Random(seed)
    tree_seeds = [master.getrandbits(63) for _ in range(n_trees)]
    n = len(X)
    trees = []
    for tree_seed in tree_seeds:
        rng = random.Random(tree_seed)
        bootstrap = [rng.randrange(n) for _ in range(n)]
        trees.append(grow_tree(X, y, bootstrap, rng, max_depth,
                               min_samples_split, features_per_split))
    return RandomForestModel(
        trees=trees,
        n_trees=n_trees,
        max_depth=max_depth,
        min_samples_split=min_samples_split,
        features_per_split=features_per_split,
    )
