"""Replay adapter: serves previously recorded predictions verbatim."""

from __future__ import annotations

from typing import Iterable

from agestack.core.io import read_predictions
from agestack.core.types import Prediction, SubjectRecord
from agestack.errors import MissingSubject, UnknownEstimator
from agestack.estimators.base import EstimatorAdapter


class ReplayAdapter(EstimatorAdapter):
    """Looks up one estimator's recorded rows by subject id."""

    def __init__(self, predictions: Iterable[Prediction], estimator_id: str):
        self.estimator_id = estimator_id
        self._by_subject: dict[str, Prediction] = {}
        for pred in predictions:
            if pred.estimator_id == estimator_id:
                self._by_subject[pred.subject_id] = pred
        if not self._by_subject:
            raise UnknownEstimator(estimator_id)
        self.returns_range = any(
            p.low is not None for p in self._by_subject.values()
        )

    def predict(self, record: SubjectRecord) -> Prediction:
        try:
            return self._by_subject[record.subject_id]
        except KeyError:
            raise MissingSubject(record.subject_id, self.estimator_id) from None


def replay(predictions_csv: str, estimator_id: str) -> ReplayAdapter:
    """Build a replay adapter from a predictions CSV on disk."""
    return ReplayAdapter(read_predictions(predictions_csv), estimator_id)
