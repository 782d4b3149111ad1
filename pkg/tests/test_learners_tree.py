"""Regression tree against a brute-force exhaustive split oracle."""

import numpy as np
import pytest

from agestack.errors import DimensionMismatch, InvalidHyperparameter
from agestack.learners import fit_tree
from agestack.learners.tree import best_split


def brute_force_best_sse(X, y, idx):
    """Exhaustive minimum of left/right SSE over every candidate split.

    Candidates are midpoints between consecutive distinct sorted values
    of each feature; SSE computed directly from definition.
    """
    best = None
    for j in range(X.shape[1]):
        values = np.unique(X[idx, j])
        for a, b in zip(values, values[1:]):
            threshold = (a + b) / 2.0
            left = [i for i in idx if X[i, j] <= threshold]
            right = [i for i in idx if X[i, j] > threshold]
            sse = sum((y[left] - np.mean(y[left])) ** 2) + sum(
                (y[right] - np.mean(y[right])) ** 2
            )
            if best is None or sse < best:
                best = sse
    return best


def walk_splits(tree, X, y):
    """Yield (node, member_indices) for every internal node of a tree."""
    stack = [(tree.root, list(range(len(y))))]
    while stack:
        node, idx = stack.pop()
        if node.feature is None:
            continue
        yield node, idx
        left = [i for i in idx if X[i, node.feature] <= node.threshold]
        right = [i for i in idx if X[i, node.feature] > node.threshold]
        stack.append((node.left, left))
        stack.append((node.right, right))


def split_sse(X, y, idx, feature, threshold):
    left = [i for i in idx if X[i, feature] <= threshold]
    right = [i for i in idx if X[i, feature] > threshold]
    return sum((y[left] - np.mean(y[left])) ** 2) + sum((y[right] - np.mean(y[right])) ** 2)


def test_every_split_matches_brute_force_oracle():
    rng = np.random.default_rng(20240817)
    for trial in range(100):
        n = int(rng.integers(4, 31))
        d = int(rng.integers(1, 4))
        X = np.round(rng.uniform(0, 10, size=(n, d)), 2)
        y = np.round(rng.uniform(0, 25, size=n), 2)
        tree = fit_tree(X, y, max_depth=2)
        for node, idx in walk_splits(tree, X, y):
            if len(set(map(tuple, X[idx]))) <= 1:
                continue
            chosen = split_sse(X, y, idx, node.feature, node.threshold)
            oracle = brute_force_best_sse(X, y, idx)
            assert abs(chosen - oracle) < 1e-9, f"trial {trial}"


def test_stump_on_two_points():
    X = np.array([[0.0], [1.0]])
    y = np.array([3.0, 7.0])
    tree = fit_tree(X, y, max_depth=1)
    assert tree.predict(np.array([[0.0], [1.0], [0.49], [0.51]])).tolist() == [
        3.0,
        7.0,
        3.0,
        7.0,
    ]


def test_pure_node_stops_splitting():
    X = np.arange(8, dtype=float).reshape(-1, 1)
    y = np.full(8, 5.0)
    tree = fit_tree(X, y)
    assert tree.node_count() == 1
    assert tree.predict(X).tolist() == [5.0] * 8


def test_constant_feature_cannot_split():
    X = np.ones((6, 1))
    y = np.array([1.0, 2.0, 3.0, 4.0, 5.0, 6.0])
    tree = fit_tree(X, y)
    assert tree.node_count() == 1
    assert tree.predict(np.ones((2, 1))).tolist() == [3.5, 3.5]


def test_max_depth_zero_is_a_leaf():
    X = np.arange(4, dtype=float).reshape(-1, 1)
    y = np.array([0.0, 0.0, 10.0, 10.0])
    tree = fit_tree(X, y, max_depth=0)
    assert tree.node_count() == 1
    assert tree.predict(X).tolist() == [5.0] * 4


def test_min_samples_split_blocks_small_nodes():
    X = np.arange(4, dtype=float).reshape(-1, 1)
    y = np.array([0.0, 1.0, 10.0, 11.0])
    tree = fit_tree(X, y, min_samples_split=5)
    assert tree.node_count() == 1


def test_depth_limit_respected():
    rng = np.random.default_rng(5)
    X = rng.uniform(size=(40, 2))
    y = rng.uniform(size=40)
    tree = fit_tree(X, y, max_depth=2)
    # depth 2 allows at most 3 internal + 4 leaf nodes
    assert tree.node_count() <= 7


def test_tie_breaks_lowest_feature_then_threshold():
    # Both features separate y identically; feature 0 must win.
    X = np.array([[0.0, 0.0], [1.0, 1.0]])
    y = np.array([0.0, 10.0])
    feature, threshold, _ = best_split(X, y, np.arange(2))
    assert feature == 0
    assert threshold == 0.5


def test_interpolates_unseen_inputs_by_leaf():
    X = np.array([[0.0], [2.0], [10.0], [12.0]])
    y = np.array([1.0, 1.0, 9.0, 9.0])
    tree = fit_tree(X, y, max_depth=1)
    assert tree.predict(np.array([[5.9], [6.1]])).tolist() == [1.0, 9.0]


def test_refit_is_deterministic():
    rng = np.random.default_rng(11)
    X = rng.uniform(size=(30, 3))
    y = rng.uniform(size=30)
    grid = rng.uniform(size=(50, 3))
    a = fit_tree(X, y, max_depth=4).predict(grid)
    b = fit_tree(X, y, max_depth=4).predict(grid)
    assert np.array_equal(a, b)


def test_input_validation():
    with pytest.raises(DimensionMismatch):
        fit_tree(np.ones((3, 2)), np.ones(4))
    with pytest.raises(InvalidHyperparameter):
        fit_tree(np.ones((3, 2)), np.ones(3), max_depth=-1)
    with pytest.raises(InvalidHyperparameter):
        fit_tree(np.ones((3, 2)), np.ones(3), min_samples_split=1)
    with pytest.raises(DimensionMismatch):
        fit_tree(np.ones((3, 2)), np.ones(3)).predict(np.ones((2, 5)))


def test_rejects_non_finite_inputs():
    X = np.array([[0.0], [np.nan]])
    with pytest.raises(DimensionMismatch):
        fit_tree(X, np.array([1.0, 2.0]))
