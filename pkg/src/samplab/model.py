"""Gradient-boosted decision trees with seeded random hyperparameter search.

The booster is self-contained: depth-limited regression trees fit to softmax
gradients with exact greedy splits, one additive ensemble per class. Desk-
scale datasets make histogram tricks unnecessary; determinism given a seed is
the property everything downstream leans on.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .config import ModelConfig
from .errors import DegenerateClassError, InvalidParameterError

log = logging.getLogger(__name__)

_EPS_HESS = 1e-9


# ---------------------------------------------------------------------------
# metrics

def confusion_matrix(y_true, y_pred, n_classes: int) -> np.ndarray:
    m = np.zeros((n_classes, n_classes), dtype=np.int64)
    for t, p in zip(np.asarray(y_true), np.asarray(y_pred)):
        m[int(t), int(p)] += 1
    return m


def balanced_accuracy(confusion) -> float:
    """Unweighted mean of per-class recall."""
    confusion = np.asarray(confusion, dtype=np.float64)
    row_sums = confusion.sum(axis=1)
    if np.any(row_sums == 0):
        raise InvalidParameterError("confusion matrix has an empty true-class row")
    return float(np.mean(np.diag(confusion) / row_sums))


def f1_macro(confusion) -> float:
    """Unweighted mean of per-class F1; a class with no predicted and no true
    positives contributes 0."""
    confusion = np.asarray(confusion, dtype=np.float64)
    row_sums = confusion.sum(axis=1)
    if np.any(row_sums == 0):
        raise InvalidParameterError("confusion matrix has an empty true-class row")
    tp = np.diag(confusion)
    pred_sums = confusion.sum(axis=0)
    scores = np.zeros(confusion.shape[0])
    for c in range(confusion.shape[0]):
        precision = tp[c] / pred_sums[c] if pred_sums[c] > 0 else 0.0
        recall = tp[c] / row_sums[c]
        if precision + recall > 0:
            scores[c] = 2 * precision * recall / (precision + recall)
    return float(np.mean(scores))


def feature_importance_order(importances) -> list[int]:
    """Feature indices sorted by ascending importance, ties by index."""
    imp = np.asarray(importances, dtype=np.float64)
    return [int(i) for i in np.lexsort((np.arange(len(imp)), imp))]


# ---------------------------------------------------------------------------
# regression tree on gradients

@dataclass
class _Tree:
    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray

    def predict(self, X: np.ndarray) -> np.ndarray:
        out = np.zeros(X.shape[0])
        stack = [(0, np.arange(X.shape[0]))]
        while stack:
            node, rows = stack.pop()
            if self.feature[node] < 0:
                out[rows] = self.value[node]
                continue
            go_left = X[rows, self.feature[node]] <= self.threshold[node]
            stack.append((self.left[node], rows[go_left]))
            stack.append((self.right[node], rows[~go_left]))
        return out


class _TreeBuilder:
    def __init__(self, X, max_depth, reg_lambda, importance_sink):
        self.X = X
        self.max_depth = max_depth
        self.reg_lambda = reg_lambda
        self.importance = importance_sink
        self.feature, self.threshold = [], []
        self.left, self.right, self.value = [], [], []

    def build(self, g, h, rows) -> _Tree:
        self._grow(g, h, rows, 0)
        return _Tree(np.asarray(self.feature), np.asarray(self.threshold),
                     np.asarray(self.left), np.asarray(self.right),
                     np.asarray(self.value))

    def _leaf(self, g, h, rows) -> int:
        node = len(self.feature)
        self.feature.append(-1)
        self.threshold.append(0.0)
        self.left.append(-1)
        self.right.append(-1)
        self.value.append(-g[rows].sum() / (h[rows].sum() + self.reg_lambda))
        return node

    def _grow(self, g, h, rows, depth) -> int:
        if depth >= self.max_depth or len(rows) < 2:
            return self._leaf(g, h, rows)
        best = self._best_split(g, h, rows)
        if best is None:
            return self._leaf(g, h, rows)
        feat, thr, gain = best
        node = len(self.feature)
        self.feature.append(feat)
        self.threshold.append(thr)
        self.left.append(-1)
        self.right.append(-1)
        self.value.append(0.0)
        self.importance[feat] += gain
        go_left = self.X[rows, feat] <= thr
        self.left[node] = self._grow(g, h, rows[go_left], depth + 1)
        self.right[node] = self._grow(g, h, rows[~go_left], depth + 1)
        return node

    def _best_split(self, g, h, rows):
        lam = self.reg_lambda
        G, H = g[rows].sum(), h[rows].sum()
        parent = G * G / (H + lam)
        best = None
        for feat in range(self.X.shape[1]):
            x = self.X[rows, feat]
            order = np.argsort(x, kind="stable")
            xs = x[order]
            if xs[0] == xs[-1]:
                continue
            gl = np.cumsum(g[rows][order])[:-1]
            hl = np.cumsum(h[rows][order])[:-1]
            cut = np.flatnonzero(xs[1:] != xs[:-1])  # only between distinct values
            if len(cut) == 0:
                continue
            gl, hl = gl[cut], hl[cut]
            gr, hr = G - gl, H - hl
            gains = 0.5 * (gl * gl / (hl + lam) + gr * gr / (hr + lam) - parent)
            pos = int(np.argmax(gains))
            gain = float(gains[pos])
            if gain > 1e-12 and (best is None or gain > best[2] + 1e-15):
                thr = 0.5 * (xs[cut[pos]] + xs[cut[pos] + 1])
                best = (feat, float(thr), gain)
        return best


# ---------------------------------------------------------------------------
# boosted ensemble

@dataclass
class GBDTModel:
    """Per-class additive tree ensembles combined through a softmax link."""

    n_classes: int
    n_features: int
    learning_rate: float
    trees: list = field(default_factory=list)  # rounds x classes
    feature_importance_: np.ndarray = None
    params: dict = field(default_factory=dict)

    def raw_scores(self, X: np.ndarray) -> np.ndarray:
        F = np.zeros((X.shape[0], self.n_classes))
        for rnd in self.trees:
            for c, tree in enumerate(rnd):
                F[:, c] += self.learning_rate * tree.predict(X)
        return F

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.n_features:
            raise InvalidParameterError(
                f"expected {self.n_features} features, got {X.shape[1] if X.ndim == 2 else 'non-matrix'}")
        p = _softmax(self.raw_scores(X))
        return p / p.sum(axis=1, keepdims=True)

    def predict(self, X: np.ndarray) -> np.ndarray:
        return np.argmax(self.predict_proba(X), axis=1)


def _softmax(F: np.ndarray) -> np.ndarray:
    z = F - F.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def fit_gbdt(X, y, n_classes, *, n_estimators, max_depth, learning_rate,
             subsample, reg_lambda, rng) -> GBDTModel:
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    n = X.shape[0]
    model = GBDTModel(n_classes=n_classes, n_features=X.shape[1],
                      learning_rate=learning_rate)
    importance = np.zeros(X.shape[1])
    onehot = np.eye(n_classes)[y]
    F = np.zeros((n, n_classes))
    n_sub = max(2, int(round(subsample * n)))
    for _ in range(n_estimators):
        P = _softmax(F)
        grad = P - onehot
        hess = np.maximum(P * (1.0 - P), _EPS_HESS)
        rows = np.sort(rng.permutation(n)[:n_sub]) if n_sub < n else np.arange(n)
        rnd = []
        for c in range(n_classes):
            tree = _TreeBuilder(X, max_depth, reg_lambda, importance).build(
                grad[:, c], hess[:, c], rows)
            F[:, c] += learning_rate * tree.predict(X)
            rnd.append(tree)
        model.trees.append(rnd)
    total = importance.sum()
    model.feature_importance_ = importance / total if total > 0 else importance
    return model


# ---------------------------------------------------------------------------
# cross-validated random search

def stratified_folds(y, n_folds, rng) -> list[np.ndarray]:
    """Row indices per fold; classes dealt round-robin after a shuffle so
    per-fold class proportions stay within one instance of the global ones."""
    y = np.asarray(y)
    folds = [[] for _ in range(n_folds)]
    offset = 0
    for c in np.unique(y):
        rows = np.flatnonzero(y == c)
        rows = rows[rng.permutation(len(rows))]
        for i, r in enumerate(rows):
            folds[(i + offset) % n_folds].append(int(r))
        offset += len(rows)
    return [np.sort(np.asarray(f, dtype=np.intp)) for f in folds]


@dataclass
class ModelReport:
    balanced_accuracy_train: float
    balanced_accuracy_test: float
    f1_train: float
    f1_test: float
    confusion_train: np.ndarray
    confusion_test: np.ndarray
    per_instance_probs: dict
    feature_importance: np.ndarray
    chosen_params: dict

    def to_payload(self) -> dict:
        return {
            "balanced_accuracy": {"train": self.balanced_accuracy_train,
                                  "test": self.balanced_accuracy_test},
            "f1_macro": {"train": self.f1_train, "test": self.f1_test},
            "confusion": {"train": self.confusion_train.tolist(),
                          "test": self.confusion_test.tolist()},
            "feature_importance": [float(v) for v in self.feature_importance],
            "chosen_params": dict(sorted(self.chosen_params.items())),
            "per_instance_probs": {str(i): [float(v) for v in p]
                                   for i, p in sorted(self.per_instance_probs.items())},
        }

    def metrics(self) -> dict:
        return {
            "train": {"balanced_accuracy": self.balanced_accuracy_train, "f1_macro": self.f1_train},
            "test": {"balanced_accuracy": self.balanced_accuracy_test, "f1_macro": self.f1_test},
        }


def _draw_params(config: ModelConfig, rng) -> dict:
    lo, hi = config.n_estimators_range
    n_estimators = int(rng.integers(lo, hi + 1))
    lo, hi = config.max_depth_range
    max_depth = int(rng.integers(lo, hi + 1))
    lo, hi = config.learning_rate_range
    learning_rate = float(rng.uniform(lo, hi))
    lo, hi = config.subsample_range
    subsample = float(rng.uniform(lo, hi))
    return {"n_estimators": n_estimators, "max_depth": max_depth,
            "learning_rate": learning_rate, "subsample": subsample}


def train(train_X, train_y, train_ids, test_X, test_y, test_ids, class_names,
          config: ModelConfig, progress=None) -> tuple[GBDTModel, ModelReport]:
    """Random-search the hyperparameter ranges, score each draw by mean CV
    accuracy on stratified folds, refit the best on the full train partition,
    and report metrics on both partitions.
    """
    config.validate()
    train_X = np.asarray(train_X, dtype=np.float64)
    train_y = np.asarray(train_y, dtype=np.int64)
    n_classes = len(class_names)
    counts = np.bincount(train_y, minlength=n_classes)
    for c, cnt in enumerate(counts):
        if cnt == 0:
            raise DegenerateClassError(
                f"class {class_names[c]!r} has no training instances left",
                class_name=str(class_names[c]))
    folds_wanted = config.cv_folds
    n_folds = int(min(folds_wanted, counts.min()))
    if n_folds < folds_wanted:
        n_folds = max(2, n_folds)
        log.warning("reducing cv folds from %d to %d (smallest class has %d instances)",
                    folds_wanted, n_folds, counts.min())

    rng = np.random.default_rng(config.seed)
    folds = stratified_folds(train_y, n_folds, rng)
    all_rows = np.arange(train_X.shape[0])

    best = None
    for it in range(config.search_iterations):
        params = _draw_params(config, rng)
        fit_seed = int(rng.integers(0, 2 ** 31 - 1))
        accs = []
        for f, held in enumerate(folds):
            train_rows = np.setdiff1d(all_rows, held)
            if len(np.unique(train_y[train_rows])) < n_classes:
                continue  # tiny class entirely inside the held-out fold
            m = fit_gbdt(train_X[train_rows], train_y[train_rows], n_classes,
                         rng=np.random.default_rng(fit_seed + f),
                         reg_lambda=config.reg_lambda, **params)
            accs.append(float((m.predict(train_X[held]) == train_y[held]).mean()))
        score = float(np.mean(accs)) if accs else -1.0
        if best is None or score > best[0]:
            best = (score, params, fit_seed)
        if progress is not None:
            progress((it + 1) / config.search_iterations)

    _, params, fit_seed = best
    model = fit_gbdt(train_X, train_y, n_classes,
                     rng=np.random.default_rng(fit_seed), reg_lambda=config.reg_lambda,
                     **params)
    model.params = dict(params)

    probs_train = model.predict_proba(train_X)
    pred_train = np.argmax(probs_train, axis=1)
    conf_train = confusion_matrix(train_y, pred_train, n_classes)
    test_X = np.asarray(test_X, dtype=np.float64)
    test_y = np.asarray(test_y, dtype=np.int64)
    probs_test = model.predict_proba(test_X)
    pred_test = np.argmax(probs_test, axis=1)
    conf_test = confusion_matrix(test_y, pred_test, n_classes)

    per_instance = {int(i): probs_train[r] for r, i in enumerate(train_ids)}
    per_instance.update({int(i): probs_test[r] for r, i in enumerate(test_ids)})

    report = ModelReport(
        balanced_accuracy_train=balanced_accuracy(conf_train),
        balanced_accuracy_test=balanced_accuracy(conf_test),
        f1_train=f1_macro(conf_train),
        f1_test=f1_macro(conf_test),
        confusion_train=conf_train,
        confusion_test=conf_test,
        per_instance_probs=per_instance,
        feature_importance=model.feature_importance_.copy(),
        chosen_params=dict(params),
    )
    return model, report
