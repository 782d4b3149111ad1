"""Harvest: run every adapter over every manifest subject, collect rows.

Per-subject failures never abort the run; they land in a JSON sidecar
next to the predictions CSV. Output rows are sorted by
(subject_id, estimator_id) so reruns over deterministic adapters
produce byte-identical files regardless of scheduling.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from agestack.core.io import write_predictions, write_text_atomic
from agestack.core.types import Manifest, Prediction, SubjectRecord
from agestack.errors import AgeStackError, RemoteBudgetExceeded, UsageError
from agestack.estimators.base import EstimatorAdapter

FailureEntry = dict[str, str]


@dataclass(frozen=True)
class HarvestResult:
    predictions: tuple[Prediction, ...]
    failures: tuple[FailureEntry, ...]
    csv_path: str
    errors_path: str


def _call_one(
    adapter: EstimatorAdapter, record: SubjectRecord
) -> tuple[Prediction | None, FailureEntry | None]:
    try:
        return adapter.predict(record), None
    except AgeStackError as exc:
        return None, {
            "subject_id": record.subject_id,
            "estimator_id": adapter.estimator_id,
            "error": type(exc).__name__,
            "detail": str(exc),
        }


def harvest(
    manifest: Manifest,
    adapters: Sequence[EstimatorAdapter],
    concurrency_limit: int,
    out_path: str | Path,
    failure_budget: int | None = None,
) -> HarvestResult:
    """Write predictions CSV plus error sidecar; return both in memory.

    ``failure_budget`` caps tolerated per-subject failures: exceeding it
    raises RemoteBudgetExceeded, but only after both files are written,
    so a partial harvest is never lost.
    """
    if concurrency_limit < 1:
        raise UsageError(f"concurrency_limit must be >= 1, got {concurrency_limit}")
    if not adapters:
        raise UsageError("harvest needs at least one adapter")
    ids = [a.estimator_id for a in adapters]
    if len(set(ids)) != len(ids):
        raise UsageError(f"duplicate estimator_id among adapters: {sorted(ids)}")

    serial = [a for a in adapters if a.single_threaded]
    threaded = [a for a in adapters if not a.single_threaded]

    outcomes: list[tuple[Prediction | None, FailureEntry | None]] = []
    for adapter in serial:
        for record in manifest.records:
            outcomes.append(_call_one(adapter, record))
    if threaded:
        tasks = [(a, r) for a in threaded for r in manifest.records]
        with ThreadPoolExecutor(max_workers=concurrency_limit) as pool:
            outcomes.extend(pool.map(lambda t: _call_one(*t), tasks))

    predictions = sorted(
        (p for p, _ in outcomes if p is not None),
        key=lambda p: (p.subject_id, p.estimator_id),
    )
    failures = sorted(
        (f for _, f in outcomes if f is not None),
        key=lambda f: (f["subject_id"], f["estimator_id"]),
    )

    out_path = Path(out_path)
    errors_path = out_path.with_name(out_path.name + ".errors.json")
    write_predictions(predictions, out_path)
    write_text_atomic(errors_path, json.dumps({"failures": failures}, indent=2) + "\n")

    if failure_budget is not None and len(failures) > failure_budget:
        raise RemoteBudgetExceeded(len(failures), failure_budget)
    return HarvestResult(
        predictions=tuple(predictions),
        failures=tuple(failures),
        csv_path=str(out_path),
        errors_path=str(errors_path),
    )
