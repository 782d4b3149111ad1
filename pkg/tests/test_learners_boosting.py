"""Gradient boosting: staged residual fitting with a recorded MSE path."""

import numpy as np
import pytest

from agestack.errors import DimensionMismatch, InvalidHyperparameter
from agestack.learners import fit_gbr, fit_tree


def make_dataset(seed, n=60, d=3):
    rng = np.random.default_rng(seed)
    X = rng.uniform(0, 10, size=(n, d))
    y = 2.0 * X[:, 0] - X[:, 1] + rng.normal(0, 1, size=n)
    return X, y


def test_mse_path_non_increasing_across_seeds():
    for seed in range(10):
        X, y = make_dataset(seed)
        model = fit_gbr(X, y, n_stages=30, learning_rate=0.2, max_depth=2)
        path = np.asarray(model.train_mse_path)
        assert len(path) == 31  # before any stage, then after each
        assert np.all(np.diff(path) <= 1e-12)


def test_final_mse_beats_single_tree():
    X, y = make_dataset(99, n=80)
    boosted = fit_gbr(X, y, n_stages=50, learning_rate=0.3, max_depth=2)
    single = fit_tree(X, y, max_depth=2)
    boosted_mse = float(np.mean((boosted.predict(X) - y) ** 2))
    single_mse = float(np.mean((single.predict(X) - y) ** 2))
    assert boosted_mse < single_mse


def test_zero_stage_model_predicts_mean():
    X, y = make_dataset(3, n=20)
    model = fit_gbr(X, y, n_stages=0)
    assert np.allclose(model.predict(X), np.mean(y))
    assert len(model.train_mse_path) == 1


def test_one_stage_unit_rate_equals_mean_plus_tree():
    X, y = make_dataset(7, n=30)
    model = fit_gbr(X, y, n_stages=1, learning_rate=1.0, max_depth=2)
    residual_tree = fit_tree(X, y - np.mean(y), max_depth=2)
    manual = np.mean(y) + residual_tree.predict(X)
    assert np.allclose(model.predict(X), manual)


def test_learning_rate_scales_first_stage():
    X, y = make_dataset(8, n=30)
    model = fit_gbr(X, y, n_stages=1, learning_rate=0.25, max_depth=2)
    residual_tree = fit_tree(X, y - np.mean(y), max_depth=2)
    manual = np.mean(y) + 0.25 * residual_tree.predict(X)
    assert np.allclose(model.predict(X), manual)


def test_interpolation_capacity_on_separable_data():
    # Deep stumps plus enough stages drive training error near zero.
    X = np.arange(16, dtype=float).reshape(-1, 1)
    y = (X[:, 0] % 4).astype(float)
    model = fit_gbr(X, y, n_stages=200, learning_rate=0.5, max_depth=4)
    assert model.train_mse_path[-1] < 1e-6


def test_hyperparameter_validation():
    X, y = make_dataset(1, n=10)
    with pytest.raises(InvalidHyperparameter):
        fit_gbr(X, y, n_stages=-1)
    with pytest.raises(InvalidHyperparameter):
        fit_gbr(X, y, learning_rate=0.0)
    with pytest.raises(InvalidHyperparameter):
        fit_gbr(X, y, learning_rate=1.5)


def test_predict_dimension_check():
    X, y = make_dataset(2, n=10)
    model = fit_gbr(X, y, n_stages=2)
    with pytest.raises(DimensionMismatch):
        model.predict(np.ones((4, 9)))


def test_deterministic_refit():
    X, y = make_dataset(5)
    grid = np.random.default_rng(0).uniform(0, 10, size=(40, 3))
    a = fit_gbr(X, y, n_stages=25, learning_rate=0.2, max_depth=2).predict(grid)
    b = fit_gbr(X, y, n_stages=25, learning_rate=0.2, max_depth=2).predict(grid)
    assert np.array_equal(a, b)
