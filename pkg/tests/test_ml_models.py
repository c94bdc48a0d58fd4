import itertools
import math
import random

import numpy as np
import pytest

from phishlens.dataset import FEATURE_NAMES, FeatureRow
from phishlens.errors import SchemaMismatch, SingleClassData, UnlabeledRow
from phishlens.ml import TrainConfig, evaluate, predict, train
from phishlens.ml.forest import (
    best_split,
    fit_forest,
    gini_of_counts,
    grow_tree,
    weighted_gini,
)
from phishlens.ml.logistic import LogisticModel, fit_logistic, log_loss, log_loss_gradient
from phishlens.ml.naive_bayes import fit_naive_bayes

N = len(FEATURE_NAMES)
DEPTH_IDX = FEATURE_NAMES.index("URL_Depth")
TERNARY_IDX = [i for i, n in enumerate(FEATURE_NAMES)
               if n in ("SSL", "sub_domain", "request_url", "url_anchor", "links")]


def random_values(rng):
    values = []
    for i, name in enumerate(FEATURE_NAMES):
        if i == DEPTH_IDX:
            values.append(rng.randrange(0, 7))
        elif i in TERNARY_IDX:
            values.append(rng.choice([-1, 0, 1]))
        else:
            values.append(rng.randrange(0, 2))
    return tuple(values)


def rows_from(X, y):
    return [FeatureRow(url=f"http://r{i}.com", values=tuple(x), label=lab)
            for i, (x, lab) in enumerate(zip(X, y))]


def noisy_rows(n, seed, flip=0.3):
    """Labeled rows where class 1 leans phishing-direction with noise."""
    rng = random.Random(seed)
    rows = []
    for i in range(n):
        label = i % 2
        values = []
        for j, name in enumerate(FEATURE_NAMES):
            if j == DEPTH_IDX:
                values.append(rng.randrange(0, 5))
            elif j in TERNARY_IDX:
                values.append(rng.choice([-1, 0, 1]) if rng.random() < flip
                              else (1 if label else 0))
            else:
                values.append(1 - label if rng.random() < flip / 2
                              else (1 if label and rng.random() < 0.8 else 0))
        rows.append(FeatureRow(url=f"http://n{i}.com", values=tuple(values), label=label))
    return rows


# --- training contract ------------------------------------------------------------

def test_single_class_rejected():
    rows = [FeatureRow(url="a", values=random_values(random.Random(0)), label=1)
            for _ in range(4)]
    with pytest.raises(SingleClassData):
        train(rows, TrainConfig(model_kind="naive_bayes"))


def test_unlabeled_rejected():
    rng = random.Random(0)
    rows = [FeatureRow(url="a", values=random_values(rng), label=1),
            FeatureRow(url="b", values=random_values(rng), label=None)]
    with pytest.raises(UnlabeledRow):
        train(rows, TrainConfig(model_kind="logistic"))


def test_too_few_rows_rejected():
    with pytest.raises(SingleClassData):
        train([FeatureRow(url="a", values=random_values(random.Random(0)), label=1)],
              TrainConfig(model_kind="naive_bayes"))


def test_predict_schema_mismatch():
    rows = noisy_rows(10, seed=1)
    model = train(rows, TrainConfig(model_kind="naive_bayes"))
    with pytest.raises(SchemaMismatch):
        predict(model, FeatureRow(url="x", values=rows[0].values[:-1], label=None))
    model.feature_schema_version = 99
    with pytest.raises(SchemaMismatch):
        predict(model, rows[0])


@pytest.mark.parametrize("kind", ["naive_bayes", "logistic", "random_forest"])
def test_seeded_determinism(kind):
    rows = noisy_rows(40, seed=2)
    cfg = TrainConfig(model_kind=kind, seed=99)
    m1 = train(rows, cfg)
    m2 = train(rows, cfg)
    assert m1.params() == m2.params()
    for row in rows:
        assert predict(m1, row) == predict(m2, row)


# --- Naive Bayes --------------------------------------------------------------------

def test_nb_symmetric_priors():
    phish = tuple(1 if i != DEPTH_IDX else 0 for i in range(N))
    legit = tuple(0 for _ in range(N))
    rows = rows_from([legit, phish], [0, 1])
    model = train(rows, TrainConfig(model_kind="naive_bayes"))
    assert model.priors == (0.5, 0.5)


def test_nb_posteriors_sum_to_one():
    rows = noisy_rows(60, seed=3)
    model = train(rows, TrainConfig(model_kind="naive_bayes"))
    rng = random.Random(4)
    for _ in range(300):
        values = random_values(rng)
        _, score = model.predict_row(values)
        # score is P(phish|x) of a normalized two-class posterior
        log_post = [math.log(model.class_counts[c] / sum(model.class_counts)) for c in (0, 1)]
        from phishlens.ml.naive_bayes import _bucket
        for f, v in enumerate(values):
            for c in (0, 1):
                log_post[c] += math.log(model.likelihoods[f][c][_bucket(f, v)])
        p0 = math.exp(log_post[0])
        p1 = math.exp(log_post[1])
        assert abs(score - p1 / (p0 + p1)) < 1e-12
        assert abs(score + (1 - score) - 1.0) < 1e-9


def test_nb_likelihoods_with_smoothing_hand_computed():
    # two rows per class; feature 0 (Have_At) is 1 for both phishing rows
    legit = tuple(0 for _ in range(N))
    phish = tuple(1 if i == 0 else 0 for i in range(N))
    model = fit_naive_bayes([legit, legit, phish, phish], [0, 0, 1, 1], smoothing=1.0)
    # P(Have_At=1 | phish) = (2 + 1) / (2 + 1*2) = 0.75
    assert model.likelihoods[0][1][1] == pytest.approx(0.75)
    # P(Have_At=1 | legit) = (0 + 1) / (2 + 2) = 0.25
    assert model.likelihoods[0][0][1] == pytest.approx(0.25)


def test_nb_depth_bucketing():
    deep = tuple(9 if i == DEPTH_IDX else 0 for i in range(N))
    shallow = tuple(0 for _ in range(N))
    model = fit_naive_bayes([shallow, deep], [0, 1], smoothing=1.0)
    # depth 9 falls into the 3+ bucket; bucket domain is {0,1,2,3}
    assert set(model.likelihoods[DEPTH_IDX][1]) == {0, 1, 2, 3}
    cls, score = model.predict_row(tuple(5 if i == DEPTH_IDX else 0 for i in range(N)))
    assert cls == 1  # any deep row matches the deep class


# --- logistic regression --------------------------------------------------------------

def test_lr_zero_model_scores_half():
    model = LogisticModel(weights=[0.0] * N, bias=0.0)
    cls, score = model.predict_row(tuple(0 for _ in range(N)))
    assert score == 0.5
    assert cls == 1  # class is 1 iff score >= 0.5


def test_lr_separable_reaches_perfect_training_accuracy():
    rng = random.Random(5)
    rows = []
    for i in range(20):
        label = i % 2
        values = [0] * N
        values[0] = label  # Have_At carries the class
        values[DEPTH_IDX] = rng.randrange(0, 3)
        rows.append(FeatureRow(url=f"u{i}", values=tuple(values), label=label))
    model = train(rows, TrainConfig(model_kind="logistic",
                                    hyperparams={"epochs": 500, "learning_rate": 0.5, "l2": 0.0}))
    assert evaluate(model, rows).accuracy == 1.0


def test_lr_gradient_matches_central_differences():
    rng = random.Random(6)
    np_rng = np.random.default_rng(7)
    for _ in range(5):
        n, d = 12, N
        X = np.array([random_values(rng) for _ in range(n)], dtype=np.float64)
        y = np.array([rng.randrange(0, 2) for _ in range(n)], dtype=np.float64)
        w = np_rng.normal(scale=0.5, size=d)
        b = float(np_rng.normal(scale=0.5))
        l2 = 0.01
        grad_w, grad_b = log_loss_gradient(w, b, X, y, l2)
        eps = 1e-6
        for j in list(range(0, d, 5)) + [d - 1]:
            w_hi, w_lo = w.copy(), w.copy()
            w_hi[j] += eps
            w_lo[j] -= eps
            numeric = (log_loss(w_hi, b, X, y, l2) - log_loss(w_lo, b, X, y, l2)) / (2 * eps)
            denom = max(abs(numeric), abs(grad_w[j]), 1e-8)
            assert abs(numeric - grad_w[j]) / denom < 1e-5
        numeric_b = (log_loss(w, b + eps, X, y, l2) - log_loss(w, b - eps, X, y, l2)) / (2 * eps)
        assert abs(numeric_b - grad_b) / max(abs(numeric_b), abs(grad_b), 1e-8) < 1e-5


# --- random forest ----------------------------------------------------------------------

def test_gini_helpers():
    assert gini_of_counts(0, 0) == 0.0
    assert gini_of_counts(5, 0) == 0.0
    assert gini_of_counts(5, 5) == pytest.approx(0.5)
    assert weighted_gini(5, 0, 0, 5) == 0.0


def brute_force_min_impurity(X, y, indices, features):
    best = None
    for f in features:
        values = sorted({X[i][f] for i in indices})
        for lo, hi in zip(values, values[1:]):
            thr = (lo + hi) / 2
            l0 = sum(1 for i in indices if X[i][f] <= thr and y[i] == 0)
            l1 = sum(1 for i in indices if X[i][f] <= thr and y[i] == 1)
            r0 = sum(1 for i in indices if X[i][f] > thr and y[i] == 0)
            r1 = sum(1 for i in indices if X[i][f] > thr and y[i] == 1)
            imp = weighted_gini(l0, l1, r0, r1)
            if best is None or imp < best:
                best = imp
    return best


def test_best_split_matches_exhaustive_search():
    rng = random.Random(8)
    for trial in range(300):
        n = rng.randrange(2, 13)  # nodes up to 12 samples
        k = rng.randrange(1, 4)  # up to 3 candidate features
        features = rng.sample(range(N), k)
        X = [random_values(rng) for _ in range(n)]
        y = [rng.randrange(0, 2) for _ in range(n)]
        got = best_split(X, y, list(range(n)), features)
        want = brute_force_min_impurity(X, y, list(range(n)), features)
        if want is None:
            assert got is None
        else:
            assert got is not None
            assert got[2] == pytest.approx(want, abs=1e-12)


def test_stump_on_have_at_separable_set():
    # a set split perfectly by Have_At must put the stump on feature 0
    rng = random.Random(9)
    X, y = [], []
    for i in range(20):
        label = i % 2
        values = list(random_values(rng))
        values[0] = label
        X.append(tuple(values))
        y.append(label)
    model = fit_forest(X, y, seed=1, n_trees=1, max_depth=1, features_per_split=N)
    root = model.trees[0]
    assert root.feature == 0
    assert root.threshold == pytest.approx(0.5)
    assert model.predict_row(X[0]) == (0, 0.0) if y[0] == 0 else True


def test_single_stump_prediction_follows_leaf_majority():
    X = [(0,) * N, (1,) + (0,) * (N - 1), (1,) + (0,) * (N - 1)]
    y = [0, 1, 1]
    rng = random.Random(1)
    tree = grow_tree(X, y, [0, 1, 2], rng, max_depth=1, min_samples_split=2,
                     features_per_split=N)
    assert tree.feature == 0
    row = (1,) + (0,) * (N - 1)
    assert tree.route(row) == 1
    assert tree.route((0,) * N) == 0


def test_forest_vote_bounds_and_threshold():
    rows = noisy_rows(30, seed=10)
    model = train(rows, TrainConfig(model_kind="random_forest", seed=3,
                                    hyperparams={"n_trees": 7}))
    allowed = {k / 7 for k in range(8)}
    for row in rows:
        cls, score = predict(model, row)
        assert min(abs(score - a) for a in allowed) < 1e-12
        assert cls == (1 if score >= 0.5 else 0)


def test_duplicating_trees_leaves_predictions_unchanged():
    rows = noisy_rows(24, seed=11)
    model = train(rows, TrainConfig(model_kind="random_forest", seed=4,
                                    hyperparams={"n_trees": 5}))
    doubled = fit_forest([r.values for r in rows], [r.label for r in rows], seed=4,
                         n_trees=5)
    doubled.trees = model.trees + model.trees
    doubled.n_trees = 10
    for row in rows:
        assert doubled.predict_row(row.values) == predict(model, row)


def test_all_trees_vote_phishing():
    from phishlens.ml.forest import RandomForestModel, TreeNode

    model = RandomForestModel(
        trees=[TreeNode(counts=(0, 5)) for _ in range(9)],
        n_trees=9, max_depth=None, min_samples_split=2, features_per_split=5)
    cls, score = model.predict_row(tuple(1 for _ in range(N)))
    assert (cls, score) == (1, 1.0)


def test_max_depth_respected():
    rows = noisy_rows(60, seed=12)
    model = train(rows, TrainConfig(model_kind="random_forest", seed=6,
                                    hyperparams={"n_trees": 10, "max_depth": 2}))

    def depth(node):
        if node.feature is None:
            return 0
        return 1 + max(depth(node.left), depth(node.right))

    assert all(depth(tree) <= 2 for tree in model.trees)


# --- evaluate ------------------------------------------------------------------------

def test_evaluate_perfect_predictions():
    rows = noisy_rows(10, seed=13, flip=0.0)
    model = train(rows, TrainConfig(model_kind="random_forest", seed=7,
                                    hyperparams={"n_trees": 15}))
    m = evaluate(model, rows)
    assert m.accuracy == 1.0 and m.f1 == 1.0


def test_hyperparameter_invariants_rejected():
    rows = noisy_rows(10, seed=73)
    with pytest.raises(ValueError):
        train(rows, TrainConfig(model_kind="random_forest", hyperparams={"n_trees": 0}))
    with pytest.raises(ValueError):
        train(rows, TrainConfig(model_kind="logistic", hyperparams={"learning_rate": 0}))
    with pytest.raises(ValueError):
        train(rows, TrainConfig(model_kind="naive_bayes", hyperparams={"smoothing": 0}))
