"""Evaluation metrics: MAE, MAE per age, and age-band accuracy.

MAE is the plain average of absolute prediction errors over the sample
set. Band accuracy scores a real-valued prediction by rounding it
half-up to the nearest integer year, clamping into 0..25, and checking
whether it lands in the same band as the true age. The rounding rule is
isolated in ``predicted_band`` so it can be swapped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from agestack.core.types import AgeRange, BAND_AGE_MAX, band_of, validate_age
from agestack.errors import CoverageMismatch, EmptyInput


@dataclass(frozen=True)
class PairedSample:
    """One (predicted, true age) pair for a subject."""

    subject_id: str
    predicted: float
    real: int

    def __post_init__(self):
        if not math.isfinite(self.predicted):
            raise ValueError(f"predicted must be finite, got {self.predicted!r}")
        validate_age(self.real, what="real")


@dataclass(frozen=True)
class BandAccuracyTable:
    """Per-band accuracies plus their unweighted mean.

    Bands with no samples are absent from ``per_band``; ``average`` is
    the unweighted mean over the bands actually present.
    """

    per_band: Mapping[AgeRange, float]
    average: float


def mae(samples: Sequence[PairedSample]) -> float:
    """Mean absolute error over a non-empty sample list."""
    if not samples:
        raise EmptyInput("mae over zero samples")
    return sum(abs(s.predicted - s.real) for s in samples) / len(samples)


def mae_per_age(samples: Sequence[PairedSample]) -> dict[int, float]:
    """MAE grouped by true age; keys are the distinct ages present."""
    if not samples:
        raise EmptyInput("mae_per_age over zero samples")
    groups: dict[int, list[PairedSample]] = {}
    for s in samples:
        groups.setdefault(s.real, []).append(s)
    return {age: mae(group) for age, group in sorted(groups.items())}


def round_half_up(x: float) -> int:
    """Nearest integer, halves away from the floor (2.5 -> 3, -0.5 -> 0)."""
    return math.floor(x + 0.5)


def predicted_band(predicted: float) -> AgeRange:
    """Band a real-valued prediction falls into, after round-and-clamp."""
    year = min(max(round_half_up(predicted), 0), BAND_AGE_MAX)
    return band_of(year)


def band_accuracy(samples: Sequence[PairedSample]) -> BandAccuracyTable:
    """Fraction of subjects per band whose prediction lands in that band."""
    if not samples:
        raise EmptyInput("band_accuracy over zero samples")
    totals: dict[AgeRange, int] = {}
    hits: dict[AgeRange, int] = {}
    for s in samples:
        true_band = band_of(s.real)  # raises OutOfRange above 25
        totals[true_band] = totals.get(true_band, 0) + 1
        if predicted_band(s.predicted) is true_band:
            hits[true_band] = hits.get(true_band, 0) + 1
    per_band = {
        band: hits.get(band, 0) / totals[band] for band in AgeRange if band in totals
    }
    average = sum(per_band.values()) / len(per_band)
    return BandAccuracyTable(per_band=per_band, average=average)


def compare_services(
    samples_by_estimator: Mapping[str, Sequence[PairedSample]],
) -> list[tuple[str, float]]:
    """Rank estimators by MAE (ascending; ties broken by estimator id).

    Every estimator must cover the same subject set; a silent
    intersection would bias the comparison, so a gap raises
    ``CoverageMismatch`` instead.
    """
    if not samples_by_estimator:
        raise EmptyInput("no estimators to compare")
    subject_sets = {
        estimator: {s.subject_id for s in samples}
        for estimator, samples in samples_by_estimator.items()
    }
    universe: set[str] = set()
    for ids in subject_sets.values():
        universe |= ids
    for estimator in sorted(subject_sets):
        missing = len(universe - subject_sets[estimator])
        if missing:
            raise CoverageMismatch(estimator, missing)
    ranked = [
        (estimator, mae(samples)) for estimator, samples in samples_by_estimator.items()
    ]
    ranked.sort(key=lambda pair: (pair[1], pair[0]))
    return ranked
