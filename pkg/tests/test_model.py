import numpy as np
import pytest

from samplab.config import ModelConfig
from samplab.errors import DegenerateClassError, InvalidParameterError
from samplab.model import (
    balanced_accuracy,
    confusion_matrix,
    f1_macro,
    feature_importance_order,
    fit_gbdt,
    stratified_folds,
    train,
)

from conftest import random_blobs

SMALL = ModelConfig(search_iterations=3, cv_folds=3, n_estimators_range=(10, 30),
                    max_depth_range=(2, 3), seed=0)


def split_blobs(seed=0, sizes=(120, 60), d=4, sep=5.0, spread=1.0):
    rng = np.random.default_rng(seed)
    X, y = random_blobs(rng, d=d, spread=spread, sep=sep, sizes=list(sizes))
    order = rng.permutation(len(y))
    X, y = X[order], y[order]
    n_test = len(y) // 4
    te, tr = np.arange(n_test), np.arange(n_test, len(y))
    return X[tr], y[tr], tr, X[te], y[te], te


class TestMetrics:
    def test_perfect_classifier(self):
        assert balanced_accuracy([[50, 0], [0, 50]]) == 1.0
        assert f1_macro([[50, 0], [0, 50]]) == 1.0

    def test_hand_computed_confusion(self):
        conf = [[45, 5], [20, 30]]
        assert balanced_accuracy(conf) == pytest.approx(0.75, abs=0)
        # per-class F1 by hand: 0.78260869..., 0.70588235...
        assert f1_macro(conf) == pytest.approx(0.744, abs=1e-3)

    def test_all_one_class_predictions(self):
        # two balanced classes, everything predicted as class 0:
        # precision 0.5 / recall 1 for class 0, zero for class 1
        conf = [[50, 0], [50, 0]]
        assert f1_macro(conf) == pytest.approx(1 / 3)
        assert balanced_accuracy(conf) == pytest.approx(0.5)

    def test_empty_true_row_rejected(self):
        with pytest.raises(InvalidParameterError):
            balanced_accuracy([[10, 0], [0, 0]])

    def test_uniform_random_predictions_monte_carlo(self):
        rng = np.random.default_rng(123)
        for c in (2, 3, 4):
            y = rng.integers(0, c, size=4000)
            pred = rng.integers(0, c, size=4000)
            conf = confusion_matrix(y, pred, c)
            assert balanced_accuracy(conf) == pytest.approx(1 / c, abs=0.05)

    def test_duplication_invariance(self):
        # balanced accuracy is recall-based: duplicating a class's test rows
        # scales one confusion row and changes nothing
        conf = np.array([[40, 10], [5, 45]])
        doubled = conf.copy()
        doubled[1] *= 3
        assert balanced_accuracy(conf) == pytest.approx(balanced_accuracy(doubled))


class TestImportanceOrder:
    def test_sorted_ascending(self):
        assert feature_importance_order([0.1, 0.7, 0.2]) == [0, 2, 1]

    def test_all_zero_identity(self):
        assert feature_importance_order([0.0, 0.0, 0.0]) == [0, 1, 2]


class TestStratifiedFolds:
    def test_proportions_within_one(self):
        rng = np.random.default_rng(5)
        y = np.concatenate([np.zeros(37, int), np.ones(23, int), np.full(11, 2)])
        folds = stratified_folds(y, 5, rng)
        assert sorted(np.concatenate(folds).tolist()) == list(range(len(y)))
        for c in range(3):
            total = (y == c).sum()
            for f in folds:
                share = (y[f] == c).sum()
                assert abs(share - total / 5) <= 1


class TestTraining:
    def test_separable_blobs_high_accuracy(self):
        args = split_blobs(seed=1, sep=6.0)
        _, rep = train(*args, ("a", "b"), SMALL)
        assert rep.balanced_accuracy_test >= 0.95

    def test_informative_feature_dominates(self):
        rng = np.random.default_rng(2)
        x = rng.uniform(-1, 1, size=(200, 1))
        x = x[np.abs(x[:, 0]) > 0.05]
        y = (x[:, 0] > 0).astype(int)
        n_test = len(y) // 4
        te, tr = np.arange(n_test), np.arange(n_test, len(y))
        _, rep = train(x[tr], y[tr], tr, x[te], y[te], te, ("neg", "pos"), SMALL)
        assert rep.feature_importance[0] >= 0.9 * rep.feature_importance.sum()

    def test_determinism(self):
        args = split_blobs(seed=3)
        _, r1 = train(*args, ("a", "b"), SMALL)
        _, r2 = train(*args, ("a", "b"), SMALL)
        assert r1.balanced_accuracy_test == r2.balanced_accuracy_test
        assert r1.f1_train == r2.f1_train
        assert np.array_equal(r1.confusion_test, r2.confusion_test)
        assert r1.chosen_params == r2.chosen_params

    def test_probs_sum_to_one(self):
        args = split_blobs(seed=4)
        model, rep = train(*args, ("a", "b"), SMALL)
        for p in rep.per_instance_probs.values():
            assert np.sum(p) == pytest.approx(1.0, abs=1e-6)

    def test_binary_probs_complementary(self):
        args = split_blobs(seed=5)
        model, _ = train(*args, ("a", "b"), SMALL)
        probs = model.predict_proba(args[0][:20])
        np.testing.assert_allclose(probs.sum(axis=1), 1.0, atol=1e-12)

    def test_confident_in_pure_region(self):
        X_tr, y_tr, tr, X_te, y_te, te = split_blobs(seed=6, sep=8.0)
        model, _ = train(X_tr, y_tr, tr, X_te, y_te, te, ("a", "b"), SMALL)
        centroid = X_tr[y_tr == 0].mean(axis=0, keepdims=True)
        assert model.predict_proba(centroid)[0, 0] > 0.9

    def test_vanished_class_raises_named_error(self):
        X_tr, y_tr, tr, X_te, y_te, te = split_blobs(seed=7)
        keep = y_tr == 0
        with pytest.raises(DegenerateClassError, match="bee"):
            train(X_tr[keep], y_tr[keep], tr[keep], X_te, y_te, te, ("ant", "bee"), SMALL)

    def test_confusion_matches_prob_argmax(self):
        X_tr, y_tr, tr, X_te, y_te, te = split_blobs(seed=8, sep=2.0)
        model, rep = train(X_tr, y_tr, tr, X_te, y_te, te, ("a", "b"), SMALL)
        pred = np.argmax(model.predict_proba(X_te), axis=1)
        np.testing.assert_array_equal(rep.confusion_test,
                                      confusion_matrix(y_te, pred, 2))

    def test_dimension_mismatch(self):
        args = split_blobs(seed=9)
        model, _ = train(*args, ("a", "b"), SMALL)
        with pytest.raises(InvalidParameterError):
            model.predict_proba(np.zeros((3, 99)))

    def test_three_classes(self):
        rng = np.random.default_rng(10)
        X, y = random_blobs(rng, d=3, sep=7.0, sizes=[50, 40, 30])
        order = rng.permutation(len(y))
        X, y = X[order], y[order]
        te, tr = np.arange(30), np.arange(30, len(y))
        model, rep = train(X[tr], y[tr], tr, X[te], y[te], te, ("a", "b", "c"), SMALL)
        assert rep.balanced_accuracy_test >= 0.9
        probs = model.predict_proba(X[te])
        np.testing.assert_allclose(probs.sum(axis=1), 1.0, atol=1e-9)
