"""Multinomial logistic regression used as a per-year age classifier.

One softmax class per distinct integer target age; the predicted "age"
is the value of the most probable class, so the classifier can stand in
a regression comparison. Training is full-batch gradient descent on the
L2-penalized cross-entropy, from a zero initialization, over internally
standardized features. With a positive penalty the objective is strictly
convex, so repeated fits are bit-identical.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from agestack.errors import DimensionMismatch, InvalidHyperparameter, NonFiniteLoss
from agestack.learners.tree import as_feature_matrix

MAX_CLASSES = 26  # one class per year of the curated 0..25 range


def softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=1, keepdims=True)


def loss_and_gradient(
    weights: np.ndarray,
    biases: np.ndarray,
    X: np.ndarray,
    class_index: np.ndarray,
    l2_lambda: float,
) -> tuple[float, np.ndarray, np.ndarray]:
    """Penalized cross-entropy and its gradients.

    loss = -(1/n) sum_i log p_i[y_i] + (l2/(2n)) ||W||^2; biases are not
    penalized. Exposed at module level so tests can check the analytic
    gradient against finite differences of the loss alone.
    """
    n = X.shape[0]
    probs = softmax(X @ weights.T + biases)
    picked = probs[np.arange(n), class_index]
    with np.errstate(divide="ignore"):  # log(0) -> -inf, caught by the caller
        loss = -float(np.mean(np.log(picked))) + l2_lambda / (2.0 * n) * float(
            np.sum(weights * weights)
        )
    delta = probs
    delta[np.arange(n), class_index] -= 1.0
    grad_w = (delta.T @ X + l2_lambda * weights) / n
    grad_b = delta.sum(axis=0) / n
    return loss, grad_w, grad_b


@dataclass
class LogisticModel:
    classes: np.ndarray  # distinct target ages, ascending
    weights: np.ndarray  # K x d, in standardized feature space
    biases: np.ndarray  # K
    feature_mean: np.ndarray
    feature_scale: np.ndarray
    l2_lambda: float

    @property
    def n_features(self) -> int:
        return self.weights.shape[1]

    def _standardize(self, X: np.ndarray) -> np.ndarray:
        return (X - self.feature_mean) / self.feature_scale

    def predict_proba(self, X) -> np.ndarray:
        X = as_feature_matrix(X)
        if X.shape[1] != self.n_features:
            raise DimensionMismatch(
                f"model was fit on {self.n_features} features, got {X.shape[1]}"
            )
        return softmax(self._standardize(X) @ self.weights.T + self.biases)

    def predict(self, X) -> np.ndarray:
        """Most probable class value per row; ties go to the lowest age."""
        probs = self.predict_proba(X)
        # argmax returns the first maximum and classes are ascending.
        return self.classes[np.argmax(probs, axis=1)].astype(np.float64)


def fit_logistic(
    X,
    y_classes,
    epochs: int = 500,
    step: float = 0.5,
    l2_lambda: float = 1.0,
) -> LogisticModel:
    """Fit by full-batch gradient descent with a fixed epoch budget.

    ``epochs=0`` keeps the zero initialization: uniform probabilities
    over the observed classes, which makes tie behavior easy to observe.
    """
    if epochs < 0:
        raise InvalidHyperparameter(f"epochs must be >= 0, got {epochs}")
    if step <= 0:
        raise InvalidHyperparameter(f"step must be positive, got {step}")
    if l2_lambda < 0:
        raise InvalidHyperparameter(f"l2_lambda must be >= 0, got {l2_lambda}")
    X = as_feature_matrix(X)
    y = np.asarray(y_classes)
    if y.ndim != 1 or y.shape[0] != X.shape[0]:
        raise DimensionMismatch(f"targets must be a length-{X.shape[0]} vector")
    if not np.all(y == y.astype(np.int64)):
        raise InvalidHyperparameter("class targets must be integer ages")
    y = y.astype(np.int64)

    classes = np.unique(y)  # ascending
    if classes.size > MAX_CLASSES:
        raise InvalidHyperparameter(
            f"{classes.size} classes exceed the supported {MAX_CLASSES}"
        )
    class_index = np.searchsorted(classes, y)

    mean = X.mean(axis=0)
    std = X.std(axis=0)
    scale = np.where(std == 0.0, 1.0, std)  # constant columns become all-zero
    Xs = (X - mean) / scale

    k, d = classes.size, X.shape[1]
    weights = np.zeros((k, d), dtype=np.float64)
    biases = np.zeros(k, dtype=np.float64)
    for _ in range(epochs):
        loss, grad_w, grad_b = loss_and_gradient(weights, biases, Xs, class_index, l2_lambda)
        if not np.isfinite(loss):
            raise NonFiniteLoss(f"loss diverged to {loss!r}; lower the step size")
        weights -= step * grad_w
        biases -= step * grad_b

    return LogisticModel(
        classes=classes,
        weights=weights,
        biases=biases,
        feature_mean=mean,
        feature_scale=scale,
        l2_lambda=l2_lambda,
    )
