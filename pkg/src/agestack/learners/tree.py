"""Greedy CART regression trees with an exhaustive midpoint split search.

At every node the split minimizing the summed squared error of the two
children is chosen over all (feature, threshold) candidates, where the
candidate thresholds are the midpoints between consecutive distinct
sorted values of each feature. Ties go to the lowest feature index, then
the lowest threshold, so fitting is fully deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from agestack.errors import DimensionMismatch, InvalidHyperparameter


def as_feature_matrix(X) -> np.ndarray:
    """Validate and convert to a finite float64 matrix (n >= 1, d >= 1)."""
    arr = np.asarray(X, dtype=np.float64)
    if arr.ndim != 2:
        raise DimensionMismatch(f"feature matrix must be 2-D, got shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DimensionMismatch(f"feature matrix must be non-empty, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DimensionMismatch("feature matrix contains non-finite values")
    return arr


def as_target_vector(y, n: int) -> np.ndarray:
    arr = np.asarray(y, dtype=np.float64)
    if arr.ndim != 1 or arr.shape[0] != n:
        raise DimensionMismatch(f"targets must be a length-{n} vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DimensionMismatch("targets contain non-finite values")
    return arr


@dataclass
class TreeNode:
    """Internal node (feature/threshold set) or leaf (value set)."""

    feature: int | None = None
    threshold: float | None = None
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None
    value: float | None = None

    @property
    def is_leaf(self) -> bool:
        return self.feature is None


@dataclass
class RegressionTree:
    root: TreeNode
    n_features: int
    max_depth: int | None

    def predict(self, X) -> np.ndarray:
        X = as_feature_matrix(X)
        if X.shape[1] != self.n_features:
            raise DimensionMismatch(
                f"model was fit on {self.n_features} features, got {X.shape[1]}"
            )
        out = np.empty(X.shape[0], dtype=np.float64)
        # Route index groups down the tree instead of walking row by row.
        stack: list[tuple[TreeNode, np.ndarray]] = [(self.root, np.arange(X.shape[0]))]
        while stack:
            node, idx = stack.pop()
            if idx.size == 0:
                continue
            if node.is_leaf:
                out[idx] = node.value
            else:
                goes_left = X[idx, node.feature] <= node.threshold
                stack.append((node.left, idx[goes_left]))
                stack.append((node.right, idx[~goes_left]))
        return out

    def node_count(self) -> int:
        count = 0
        stack = [self.root]
        while stack:
            node = stack.pop()
            count += 1
            if not node.is_leaf:
                stack.extend((node.left, node.right))
        return count


def best_split(
    X: np.ndarray, y: np.ndarray, idx: np.ndarray
) -> tuple[int, float, float] | None:
    """Best (feature, threshold, summed child SSE) for the rows ``idx``.

    Returns None when no feature has two distinct values. The SSE of a
    child is computed as sum(y^2) - sum(y)^2 / n via prefix sums.
    """
    y_node = y[idx]
    best: tuple[int, float, float] | None = None
    for j in range(X.shape[1]):
        values = X[idx, j]
        order = np.argsort(values, kind="stable")
        v = values[order]
        t = y_node[order]
        boundaries = np.nonzero(v[1:] != v[:-1])[0] + 1
        if boundaries.size == 0:
            continue
        csum = np.cumsum(t)
        csum_sq = np.cumsum(t * t)
        total = csum[-1]
        total_sq = csum_sq[-1]
        n_left = boundaries.astype(np.float64)
        n_right = t.size - n_left
        left_sum = csum[boundaries - 1]
        left_sq = csum_sq[boundaries - 1]
        sse = (left_sq - left_sum**2 / n_left) + (
            (total_sq - left_sq) - (total - left_sum) ** 2 / n_right
        )
        k = int(np.argmin(sse))  # first minimum -> lowest threshold
        if best is None or sse[k] < best[2]:
            threshold = (v[boundaries[k] - 1] + v[boundaries[k]]) / 2.0
            best = (j, float(threshold), float(sse[k]))
    return best


def fit_tree(
    X,
    y,
    max_depth: int | None = None,
    min_samples_split: int = 2,
) -> RegressionTree:
    """Fit a CART regression tree; ``max_depth=None`` means unlimited."""
    if max_depth is not None and max_depth < 0:
        raise InvalidHyperparameter(f"max_depth must be >= 0, got {max_depth}")
    if min_samples_split < 2:
        raise InvalidHyperparameter(f"min_samples_split must be >= 2, got {min_samples_split}")
    X = as_feature_matrix(X)
    y = as_target_vector(y, X.shape[0])

    root = TreeNode()
    stack: list[tuple[TreeNode, np.ndarray, int]] = [(root, np.arange(X.shape[0]), 0)]
    while stack:
        node, idx, depth = stack.pop()
        y_node = y[idx]
        depth_stop = max_depth is not None and depth >= max_depth
        pure = np.ptp(y_node) == 0.0
        split = None
        if not (depth_stop or pure or idx.size < min_samples_split):
            split = best_split(X, y, idx)
        if split is None:
            node.value = float(y_node.mean())
            continue
        feature, threshold, _ = split
        node.feature = feature
        node.threshold = threshold
        node.left = TreeNode()
        node.right = TreeNode()
        goes_left = X[idx, feature] <= threshold
        stack.append((node.left, idx[goes_left], depth + 1))
        stack.append((node.right, idx[~goes_left], depth + 1))
    return RegressionTree(root=root, n_features=X.shape[1], max_depth=max_depth)
