from __future__ import annotations

import math
import random

import numpy as np
import pytest

from newsciv.features import SparseVector
from newsciv.linmodel import (
    LogisticModel,
    TrainConfig,
    evaluate,
    fit_with_history,
    gradient,
    load_logistic,
    loss,
    roc_auc,
    save_logistic,
    stack,
    train_logistic,
)


def dense_loss_oracle(w: np.ndarray, b: float, X: np.ndarray, y: np.ndarray, lam: float) -> float:
    """Independent dense loss: per-sample math on raw floats."""
    total = 0.0
    for i in range(len(y)):
        z = float(np.dot(X[i], w)) + b
        # log(1 + e^z) - y*z, stably
        total += max(z, 0.0) + math.log1p(math.exp(-abs(z))) - y[i] * z
    return total / len(y) + 0.5 * lam * float(np.dot(w, w))


def fd_gradient_oracle(w, b, X, y, lam, h=1e-5):
    """Central finite differences of the dense loss."""
    grad_w = np.zeros_like(w)
    for j in range(len(w)):
        wp, wm = w.copy(), w.copy()
        wp[j] += h
        wm[j] -= h
        grad_w[j] = (dense_loss_oracle(wp, b, X, y, lam) - dense_loss_oracle(wm, b, X, y, lam)) / (2 * h)
    grad_b = (dense_loss_oracle(w, b + h, X, y, lam) - dense_loss_oracle(w, b - h, X, y, lam)) / (2 * h)
    return grad_w, grad_b


def brute_force_auc(scores, labels) -> float:
    """All (positive, negative) pairs; ties count one half."""
    pos = [s for s, l in zip(scores, labels) if l]
    neg = [s for s, l in zip(scores, labels) if not l]
    wins = sum(1.0 if p > n else 0.5 if p == n else 0.0 for p in pos for n in neg)
    return wins / (len(pos) * len(neg))


def sparse_rows(X: np.ndarray) -> list[SparseVector]:
    rows = []
    for row in X:
        pairs = [(j, v) for j, v in enumerate(row) if v != 0.0]
        rows.append(SparseVector.from_pairs(X.shape[1], pairs))
    return rows


def random_instance(rng: np.random.Generator, n: int, d: int):
    X = rng.normal(size=(n, d))
    X[rng.random(size=X.shape) < 0.3] = 0.0  # make it genuinely sparse
    y = rng.random(n) < 0.5
    if y.all() or not y.any():
        y[0] = ~y[0]
    return X, y


class TestGradient:
    def test_gradient_at_zero_matches_mean_residual(self):
        # At w=0, b=0 every sigmoid is 0.5, so the gradient per coordinate
        # is the mean of (0.5 - y_i) * x_i.
        X = np.array([[1.0, 2.0], [0.0, -1.0], [3.0, 0.5]])
        y = np.array([1.0, 0.0, 1.0])
        A = stack(sparse_rows(X))
        grad_w, grad_b = gradient(np.zeros(2), 0.0, A, y, 0.0)
        expected = ((0.5 - y)[:, None] * X).mean(axis=0)
        assert grad_w == pytest.approx(expected, abs=1e-12)
        assert grad_b == pytest.approx((0.5 - y).mean(), abs=1e-12)

    def test_matches_central_finite_differences(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            n, d = int(rng.integers(2, 21)), int(rng.integers(1, 11))
            X, y = random_instance(rng, n, d)
            w = rng.normal(size=d)
            b = float(rng.normal())
            lam = float(rng.choice([0.0, 1e-3, 0.1]))
            A = stack(sparse_rows(X))
            grad_w, grad_b = gradient(w, b, A, y.astype(float), lam)
            fd_w, fd_b = fd_gradient_oracle(w, b, X, y.astype(float), lam)
            scale = max(np.max(np.abs(fd_w)), abs(fd_b), 1e-8)
            assert np.max(np.abs(grad_w - fd_w)) / scale < 1e-5
            assert abs(grad_b - fd_b) / scale < 1e-5

    def test_loss_matches_dense_oracle(self):
        rng = np.random.default_rng(3)
        X, y = random_instance(rng, 15, 6)
        w = rng.normal(size=6)
        A = stack(sparse_rows(X))
        assert loss(w, 0.3, A, y.astype(float), 1e-2) == pytest.approx(
            dense_loss_oracle(w, 0.3, X, y.astype(float), 1e-2), rel=1e-12
        )


class TestTraining:
    def test_zero_iterations_gives_zero_model(self):
        X = sparse_rows(np.array([[1.0], [-1.0]]))
        model = train_logistic(X, [True, False], TrainConfig(max_iterations=0))
        assert model.weights.tolist() == [0.0]
        assert model.bias == 0.0
        assert model.predict_proba(X[0]) == 0.5

    def test_separable_1d_reaches_perfect_training_accuracy(self):
        X = sparse_rows(np.array([[-1.0], [1.0]]))
        model = train_logistic(X, [False, True], TrainConfig(l2_lambda=0.0, max_iterations=200))
        assert model.predict(X[0]) is False
        assert model.predict(X[1]) is True

    def test_loss_non_increasing_across_accepted_steps(self):
        rng = np.random.default_rng(11)
        X, y = random_instance(rng, 40, 8)
        _, history = fit_with_history(
            sparse_rows(X), y.tolist(), TrainConfig(max_iterations=100, learning_rate=4.0)
        )
        assert len(history) > 1
        assert all(b <= a for a, b in zip(history, history[1:]))

    def test_single_class_errors(self):
        X = sparse_rows(np.array([[1.0], [2.0]]))
        with pytest.raises(ValueError, match="single class"):
            train_logistic(X, [True, True])

    def test_length_mismatch_and_too_few(self):
        X = sparse_rows(np.array([[1.0], [2.0]]))
        with pytest.raises(ValueError):
            train_logistic(X, [True])
        with pytest.raises(ValueError):
            train_logistic(X[:1], [True])

    def test_deterministic(self):
        rng = np.random.default_rng(5)
        X, y = random_instance(rng, 30, 5)
        rows = sparse_rows(X)
        m1 = train_logistic(rows, y.tolist())
        m2 = train_logistic(rows, y.tolist())
        assert m1.weights.tolist() == m2.weights.tolist()
        assert m1.bias == m2.bias


class TestPredict:
    def test_zero_model_is_half(self):
        model = LogisticModel(weights=np.zeros(2), bias=0.0)
        assert model.predict_proba(SparseVector.from_pairs(2, [(0, 1.0)])) == 0.5

    def test_sigmoid_saturation(self):
        model = LogisticModel(weights=np.zeros(1), bias=20.0)
        assert model.predict_proba(SparseVector.from_pairs(1, [(0, 1.0)])) >= 0.999999

    def test_no_overflow_at_extreme_logits(self):
        x = SparseVector.from_pairs(1, [(0, 1.0)])
        high = LogisticModel(weights=np.array([1000.0]), bias=0.0)
        low = LogisticModel(weights=np.array([-1000.0]), bias=0.0)
        with np.errstate(over="raise"):
            assert high.predict_proba(x) == 1.0
            assert low.predict_proba(x) == 0.0

    def test_antisymmetry(self):
        rng = np.random.default_rng(2)
        for _ in range(25):
            w = rng.normal(size=4)
            b = float(rng.normal())
            x = SparseVector.from_pairs(4, [(j, float(rng.normal() or 1.0)) for j in range(4)])
            p = LogisticModel(weights=w, bias=b).predict_proba(x)
            q = LogisticModel(weights=-w, bias=-b).predict_proba(x)
            assert p + q == pytest.approx(1.0, abs=1e-12)

    def test_dimension_mismatch_errors(self):
        model = LogisticModel(weights=np.zeros(2), bias=0.0)
        with pytest.raises(ValueError):
            model.predict_proba(SparseVector.from_pairs(3, [(0, 1.0)]))

    def test_threshold_is_strict(self):
        model = LogisticModel(weights=np.zeros(1), bias=0.0)
        x = SparseVector.from_pairs(1, [(0, 1.0)])
        assert model.predict(x, threshold=0.5) is False  # proba exactly 0.5
        assert model.predict(x, threshold=0.49) is True
        assert model.predict(x, threshold=1.0) is False


class TestRocAuc:
    def test_hand_example(self):
        scores = [0.9, 0.4, 0.1, 0.7]
        labels = [True, True, False, False]
        assert roc_auc(scores, labels) == 0.75
        assert brute_force_auc(scores, labels) == 0.75

    def test_perfect_ranking(self):
        assert roc_auc([0.9, 0.8, 0.2, 0.1], [True, True, False, False]) == 1.0

    def test_all_ties_is_half(self):
        assert roc_auc([0.5, 0.5, 0.5, 0.5], [True, False, True, False]) == 0.5

    def test_single_class_errors(self):
        with pytest.raises(ValueError):
            roc_auc([0.1, 0.2], [True, True])

    def test_matches_brute_force_on_random_instances(self):
        rng = random.Random(99)
        for trial in range(100):
            n = rng.randint(2, 50)
            if trial < 30:
                # force duplicate scores
                scores = [rng.choice([0.1, 0.25, 0.5, 0.9]) for _ in range(n)]
            else:
                scores = [rng.random() for _ in range(n)]
            labels = [rng.random() < 0.5 for _ in range(n)]
            if all(labels) or not any(labels):
                labels[0] = not labels[0]
            assert roc_auc(scores, labels) == pytest.approx(
                brute_force_auc(scores, labels), abs=1e-12
            )

    def test_invariant_under_monotone_transform(self):
        rng = random.Random(4)
        scores = [rng.random() for _ in range(30)]
        labels = [rng.random() < 0.4 for _ in range(30)]
        labels[0], labels[1] = True, False
        base = roc_auc(scores, labels)
        assert roc_auc([math.exp(3 * s) for s in scores], labels) == pytest.approx(base, abs=1e-12)
        assert roc_auc([s * 100 - 7 for s in scores], labels) == pytest.approx(base, abs=1e-12)


class TestEvaluate:
    def _fixed_model(self):
        # x = +1 predicts positive, x = -1 predicts negative
        return LogisticModel(weights=np.array([10.0]), bias=0.0)

    def test_hand_confusion_matrix(self):
        model = self._fixed_model()
        X = [SparseVector.from_pairs(1, [(0, v)]) for v in (1.0, 1.0, -1.0, -1.0)]
        y = [True, False, True, False]
        report = evaluate(model, X, y)
        assert (report.tp, report.fp, report.fn, report.tn) == (1, 1, 1, 1)
        assert report.accuracy == 0.5
        assert report.precision == 0.5
        assert report.recall == 0.5
        assert report.f1 == 0.5

    def test_perfect_predictions(self):
        model = self._fixed_model()
        X = [SparseVector.from_pairs(1, [(0, v)]) for v in (1.0, 1.0, -1.0, -1.0)]
        y = [True, True, False, False]
        report = evaluate(model, X, y)
        assert report.accuracy == report.precision == report.recall == report.f1 == 1.0
        assert report.auc == 1.0

    def test_counts_partition_test_set(self):
        rng = np.random.default_rng(8)
        X, y = random_instance(rng, 25, 3)
        model = train_logistic(sparse_rows(X), y.tolist(), TrainConfig(max_iterations=5))
        report = evaluate(model, sparse_rows(X), y.tolist())
        assert report.tp + report.fp + report.tn + report.fn == 25

    def test_undefined_precision_flagged(self):
        # threshold 1.0 -> no positive predictions at all
        model = self._fixed_model()
        X = [SparseVector.from_pairs(1, [(0, v)]) for v in (1.0, -1.0)]
        report = evaluate(model, X, [True, False], threshold=1.0)
        assert report.precision == 0.0
        assert not report.precision_defined
        assert report.recall_defined


class TestSerialization:
    def test_round_trip(self, tmp_path):
        model = LogisticModel(weights=np.array([0.0, -1.5, 2.25]), bias=0.125)
        path = tmp_path / "model.json"
        save_logistic(model, path)
        loaded = load_logistic(path)
        assert loaded.weights.tolist() == model.weights.tolist()
        assert loaded.bias == model.bias

    def test_rejects_unknown_version(self, tmp_path):
        path = tmp_path / "model.json"
        path.write_text('{"format_version": 0, "dimension": 1, "bias": 0, "weights": []}')
        with pytest.raises(ValueError):
            load_logistic(path)
