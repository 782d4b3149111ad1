"""Stagewise squared-loss gradient boosting over CART trees.

The model starts at the training-target mean and adds ``n_stages`` trees,
each fit to the current residuals and scaled by the learning rate. With
squared loss and a learning rate in (0, 1] the training MSE is
non-increasing stage over stage.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from agestack.errors import DimensionMismatch, InvalidHyperparameter
from agestack.learners.tree import (
    RegressionTree,
    as_feature_matrix,
    as_target_vector,
    fit_tree,
)


@dataclass
class GradientBoostingModel:
    init_value: float
    learning_rate: float
    stages: list[RegressionTree]
    n_features: int
    # Training MSE after 0..M stages, recorded during the fit.
    train_mse_path: list[float] = field(default_factory=list, compare=False, repr=False)

    def predict(self, X) -> np.ndarray:
        X = as_feature_matrix(X)
        if X.shape[1] != self.n_features:
            raise DimensionMismatch(
                f"model was fit on {self.n_features} features, got {X.shape[1]}"
            )
        out = np.full(X.shape[0], self.init_value, dtype=np.float64)
        for stage in self.stages:
            out += self.learning_rate * stage.predict(X)
        return out


def fit_gbr(
    X,
    y,
    n_stages: int = 100,
    learning_rate: float = 0.1,
    max_depth: int | None = 3,
    min_samples_split: int = 2,
) -> GradientBoostingModel:
    """Fit a gradient boosting regressor; deterministic for fixed inputs.

    ``n_stages=0`` is the degenerate mean-only model: the MSE path then
    has a single entry and predictions equal the target mean.
    """
    if n_stages < 0:
        raise InvalidHyperparameter(f"n_stages must be >= 0, got {n_stages}")
    if not 0.0 < learning_rate <= 1.0:
        raise InvalidHyperparameter(f"learning_rate must be in (0, 1], got {learning_rate}")
    X = as_feature_matrix(X)
    y = as_target_vector(y, X.shape[0])

    init_value = float(y.mean())
    current = np.full(y.shape, init_value, dtype=np.float64)
    stages: list[RegressionTree] = []
    mse_path = [float(np.mean((y - current) ** 2))]
    for _ in range(n_stages):
        residuals = y - current
        stage = fit_tree(X, residuals, max_depth=max_depth, min_samples_split=min_samples_split)
        stages.append(stage)
        current += learning_rate * stage.predict(X)
        mse_path.append(float(np.mean((y - current) ** 2)))
    return GradientBoostingModel(
        init_value=init_value,
        learning_rate=learning_rate,
        stages=stages,
        n_features=X.shape[1],
        train_mse_path=mse_path,
    )
