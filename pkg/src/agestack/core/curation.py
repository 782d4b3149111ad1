"""Balanced-dataset curation: equal per-age quotas over a declared range."""

from __future__ import annotations

from collections import defaultdict
from typing import Iterable, Sequence

from agestack.core.types import Manifest, SubjectRecord, validate_age
from agestack.errors import UnderfilledAge, UsageError
from agestack.rng import SplitMix64


def curate_balanced(
    candidates: Sequence[SubjectRecord] | Iterable[SubjectRecord],
    quota: int,
    age_min: int,
    age_max: int,
    seed: int,
) -> Manifest:
    """Select exactly ``quota`` records per age in ``age_min..age_max``.

    Selection within each age is a seeded uniform sample without
    replacement, drawn age by age (ascending) from one SplitMix64 stream,
    so the result is deterministic for a fixed seed and candidate order.
    Candidates outside the range are ignored.

    Raises ``UnderfilledAge`` if any age in the range has fewer than
    ``quota`` candidates.
    """
    validate_age(age_min, what="age_min")
    validate_age(age_max, what="age_max")
    if age_min > age_max:
        raise UsageError("age_min above age_max")
    if quota < 1:
        raise UsageError("quota must be positive")

    by_age: dict[int, list[SubjectRecord]] = defaultdict(list)
    for rec in candidates:
        if age_min <= rec.age <= age_max:
            by_age[rec.age].append(rec)

    for age in range(age_min, age_max + 1):
        available = len(by_age.get(age, ()))
        if available < quota:
            raise UnderfilledAge(age, available, quota)

    rng = SplitMix64(seed)
    chosen: list[SubjectRecord] = []
    for age in range(age_min, age_max + 1):
        chosen.extend(rng.sample_without_replacement(by_age[age], quota))

    return Manifest(
        records=tuple(chosen),
        declared_age_min=age_min,
        declared_age_max=age_max,
        per_age_quota=quota,
    )
