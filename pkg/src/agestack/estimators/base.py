"""Adapter interface every base estimator plugs into.

An adapter answers one question: for this manifest record, what age does
the underlying service think the subject is. Offline adapters (replay,
simulator) must be deterministic; remote adapters are not and must carry
a digest of the raw response instead.
"""

from __future__ import annotations

from agestack.core.types import Prediction, SubjectRecord


class EstimatorAdapter:
    """Base estimator behind a uniform predict-one-record interface.

    Capability flags drive the harvest scheduler: ``single_threaded``
    adapters are never called concurrently, the rest may be.
    """

    estimator_id: str
    returns_range: bool = False
    returns_bands: bool = False
    single_threaded: bool = False

    def predict(self, record: SubjectRecord) -> Prediction:
        raise NotImplementedError
