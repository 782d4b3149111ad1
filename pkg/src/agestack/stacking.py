"""Out-of-fold stacking: base-estimator features in, meta-predictions out.

The meta-learner sees exactly one column per base estimator (the point
prediction) and nothing else. Folds are a seeded shuffle followed by
round-robin assignment; every subject's stacked prediction comes from a
model whose training folds excluded that subject.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Mapping, Protocol, Sequence

import numpy as np

from agestack.core.types import AgeRange, Manifest, Prediction
from agestack.errors import (
    CoverageMismatch,
    InvalidHyperparameter,
    TooFewSubjects,
    UnknownEstimator,
)
from agestack.learners import fit_bagging, fit_gbr, fit_logistic, fit_tree
from agestack.rng import SplitMix64


class Predictor(Protocol):
    def predict(self, X) -> np.ndarray: ...


# fit(X_train, y_train, fold_seed) -> fitted predictor
FitFn = Callable[[np.ndarray, np.ndarray, int], Predictor]


@dataclass(frozen=True, eq=False)
class StackingMatrix:
    """Per-subject base-estimator predictions plus true ages.

    ``features[i, j]`` is estimator ``estimator_order[j]``'s point
    prediction for ``subject_ids[i]``; subjects follow manifest order.
    """

    subject_ids: tuple[str, ...]
    estimator_order: tuple[str, ...]
    features: np.ndarray
    targets: np.ndarray

    def __len__(self) -> int:
        return len(self.subject_ids)


@dataclass(frozen=True)
class FoldPlan:
    k: int
    assignment: Mapping[str, int]

    def __post_init__(self):
        if self.k < 2:
            raise InvalidHyperparameter(f"k must be >= 2, got {self.k}")
        for subject_id, fold in self.assignment.items():
            if not 0 <= fold < self.k:
                raise InvalidHyperparameter(
                    f"subject {subject_id!r} assigned to fold {fold} outside 0..{self.k - 1}"
                )

    def fold_sizes(self) -> list[int]:
        sizes = [0] * self.k
        for fold in self.assignment.values():
            sizes[fold] += 1
        return sizes


def assemble(
    manifest: Manifest,
    predictions: Iterable[Prediction],
    estimator_order: Sequence[str],
) -> StackingMatrix:
    """Build the n-by-d stacking matrix in manifest and declared order."""
    if not estimator_order:
        raise UnknownEstimator("<empty estimator order>")
    points: dict[str, dict[str, float]] = {e: {} for e in estimator_order}
    wanted = set(estimator_order)
    for pred in predictions:
        if pred.estimator_id in wanted:
            points[pred.estimator_id][pred.subject_id] = pred.point

    subject_ids = manifest.subject_ids()
    for estimator in estimator_order:
        have = points[estimator]
        if not have:
            raise UnknownEstimator(estimator)
        missing = sum(1 for s in subject_ids if s not in have)
        if missing:
            raise CoverageMismatch(estimator, missing)

    features = np.array(
        [[points[e][s] for e in estimator_order] for s in subject_ids],
        dtype=np.float64,
    )
    targets = np.array([r.age for r in manifest.records], dtype=np.float64)
    return StackingMatrix(
        subject_ids=tuple(subject_ids),
        estimator_order=tuple(estimator_order),
        features=features,
        targets=targets,
    )


def plan_folds(subject_ids: Sequence[str], k: int, seed: int) -> FoldPlan:
    """Seeded shuffle then round-robin; fold sizes differ by at most one."""
    if k < 2:
        raise InvalidHyperparameter(f"k must be >= 2, got {k}")
    if k > len(subject_ids):
        raise TooFewSubjects(f"k={k} folds need at least k subjects, got {len(subject_ids)}")
    order = list(subject_ids)
    SplitMix64(seed).shuffle(order)
    return FoldPlan(k=k, assignment={s: i % k for i, s in enumerate(order)})


def stack_oof(
    matrix: StackingMatrix,
    plan: FoldPlan,
    fit_fn: FitFn,
    seed: int = 0,
) -> np.ndarray:
    """Out-of-fold predictions aligned with ``matrix.subject_ids``.

    For each fold the learner is trained on every other fold and asked
    to predict the held-out subjects, so no prediction comes from a
    model that saw its subject. Per-fold learner seeds are spawned from
    ``seed`` so folds could run concurrently without changing output.
    """
    plan_subjects = set(plan.assignment)
    matrix_subjects = set(matrix.subject_ids)
    if plan_subjects != matrix_subjects:
        raise CoverageMismatch("<fold plan>", len(matrix_subjects ^ plan_subjects))

    folds = np.array([plan.assignment[s] for s in matrix.subject_ids])
    seed_stream = SplitMix64(seed)
    fold_seeds = [seed_stream.next_u64() for _ in range(plan.k)]

    out = np.empty(len(matrix), dtype=np.float64)
    for fold in range(plan.k):
        held_out = folds == fold
        model = fit_fn(matrix.features[~held_out], matrix.targets[~held_out], fold_seeds[fold])
        out[held_out] = model.predict(matrix.features[held_out])
    return out


def oof_predictions(
    matrix: StackingMatrix, oof: np.ndarray, estimator_id: str
) -> list[Prediction]:
    """Wrap an OOF vector in prediction rows for the shared CSV schema."""
    clipped = np.maximum(oof, 0.0)  # Prediction.point must be >= 0
    return [
        Prediction(subject_id=s, estimator_id=estimator_id, point=float(p))
        for s, p in zip(matrix.subject_ids, clipped)
    ]


def ds13k_feature(band: AgeRange) -> float:
    """Numeric stacking feature for a band classifier output: the midpoint."""
    return band.midpoint


@dataclass(frozen=True)
class LearnerSpec:
    """Named meta-learner plus hyperparameters, resolvable to a fit function."""

    name: str
    params: Mapping[str, Any] = field(default_factory=dict)

    def fit_fn(self) -> FitFn:
        params = dict(self.params)
        if self.name == "tree":
            return lambda X, y, s: fit_tree(X, y, **params)
        if self.name == "gbr":
            return lambda X, y, s: fit_gbr(X, y, **params)
        if self.name == "bagging":
            return lambda X, y, s: fit_bagging(X, y, seed=s, **params)
        if self.name == "logistic":
            return lambda X, y, s: fit_logistic(X, y, **params)
        raise InvalidHyperparameter(f"unknown learner {self.name!r}")
