"""Bootstrap-aggregated CART trees (plain bagging, no feature subsampling).

Each member tree is fit on n draws with replacement from the training
rows. Member bootstrap streams are spawned one per member from the seed,
so members could be fit in parallel without changing the result.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from agestack.errors import DimensionMismatch, InvalidHyperparameter
from agestack.learners.tree import (
    RegressionTree,
    as_feature_matrix,
    as_target_vector,
    fit_tree,
)
from agestack.rng import SplitMix64


@dataclass
class BaggingModel:
    members: list[RegressionTree]
    seed: int
    n_features: int

    def predict(self, X) -> np.ndarray:
        X = as_feature_matrix(X)
        if X.shape[1] != self.n_features:
            raise DimensionMismatch(
                f"model was fit on {self.n_features} features, got {X.shape[1]}"
            )
        total = np.zeros(X.shape[0], dtype=np.float64)
        for member in self.members:
            total += member.predict(X)
        return total / len(self.members)


def fit_bagging(
    X,
    y,
    n_members: int = 10,
    max_depth: int | None = None,
    min_samples_split: int = 2,
    seed: int = 0,
    bootstrap: bool = True,
) -> BaggingModel:
    """Fit a bagging regressor; deterministic for a fixed seed.

    ``bootstrap=False`` replaces resampling with identity sampling (every
    member sees the full training set); it exists as a test hook and makes
    a one-member ensemble coincide with a single fitted tree.
    """
    if n_members < 1:
        raise InvalidHyperparameter(f"n_members must be >= 1, got {n_members}")
    X = as_feature_matrix(X)
    y = as_target_vector(y, X.shape[0])
    n = X.shape[0]

    seed_stream = SplitMix64(seed)
    member_seeds = [seed_stream.next_u64() for _ in range(n_members)]
    members: list[RegressionTree] = []
    for member_seed in member_seeds:
        if bootstrap:
            idx = np.asarray(SplitMix64(member_seed).bootstrap_indices(n), dtype=np.intp)
        else:
            idx = np.arange(n)
        members.append(
            fit_tree(X[idx], y[idx], max_depth=max_depth, min_samples_split=min_samples_split)
        )
    return BaggingModel(members=members, seed=seed, n_features=X.shape[1])
