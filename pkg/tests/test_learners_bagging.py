"""Bagging: bootstrap resampling from the project PRNG, mean aggregation."""

import numpy as np
import pytest

from agestack.errors import InvalidHyperparameter
from agestack.learners import fit_bagging, fit_tree
from agestack.rng import SplitMix64


def make_dataset(seed, n=50):
    rng = np.random.default_rng(seed)
    X = rng.uniform(0, 10, size=(n, 2))
    y = X[:, 0] + 0.5 * X[:, 1] + rng.normal(0, 0.5, size=n)
    return X, y


def test_without_bootstrap_equals_single_tree():
    X, y = make_dataset(1)
    bagged = fit_bagging(X, y, n_members=5, max_depth=3, seed=0, bootstrap=False)
    single = fit_tree(X, y, max_depth=3)
    assert np.allclose(bagged.predict(X), single.predict(X))


def test_prediction_is_member_mean():
    X, y = make_dataset(2)
    model = fit_bagging(X, y, n_members=7, max_depth=2, seed=3)
    stacked = np.stack([m.predict(X) for m in model.members])
    assert np.allclose(model.predict(X), stacked.mean(axis=0))


def test_member_resamples_follow_seed_stream():
    # The k-th member trains on SplitMix64(s_k).bootstrap_indices(n) where
    # s_k is the k-th draw from SplitMix64(seed): rebuild member 0 by hand.
    X, y = make_dataset(4, n=30)
    seed = 1234
    model = fit_bagging(X, y, n_members=3, max_depth=2, seed=seed)
    member_seed = SplitMix64(seed).next_u64()
    idx = SplitMix64(member_seed).bootstrap_indices(30)
    manual = fit_tree(X[idx], y[idx], max_depth=2)
    assert np.allclose(model.members[0].predict(X), manual.predict(X))


def test_same_seed_reproduces_and_seeds_differ():
    X, y = make_dataset(5)
    grid = np.random.default_rng(9).uniform(0, 10, size=(30, 2))
    a = fit_bagging(X, y, n_members=5, max_depth=3, seed=7).predict(grid)
    b = fit_bagging(X, y, n_members=5, max_depth=3, seed=7).predict(grid)
    c = fit_bagging(X, y, n_members=5, max_depth=3, seed=8).predict(grid)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_smooths_out_of_sample_error():
    X, y = make_dataset(6, n=120)
    X_test, y_test = make_dataset(60, n=200)
    bagged = fit_bagging(X, y, n_members=20, seed=0)
    single = fit_tree(X, y)
    bag_mse = float(np.mean((bagged.predict(X_test) - y_test) ** 2))
    single_mse = float(np.mean((single.predict(X_test) - y_test) ** 2))
    assert bag_mse < single_mse


def test_hyperparameter_validation():
    X, y = make_dataset(1, n=10)
    with pytest.raises(InvalidHyperparameter):
        fit_bagging(X, y, n_members=0)
