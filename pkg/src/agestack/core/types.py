"""Core domain types: ages, age bands, subjects, manifests, predictions.

All values are immutable after construction and safe to share across
threads.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from agestack.errors import (
    DuplicateSubjectId,
    EmptyInput,
    OutOfRange,
    UnbalancedManifest,
)

# Hard ceiling for any age label this package will accept.
AGE_MAX_SUPPORTED = 130

# Upper bound of the curated range this artifact works on; the band
# taxonomy below is only defined up to here.
BAND_AGE_MAX = 25

# Characters that would force quoting in the constrained CSV columns.
_CSV_UNSAFE = {",", '"', "\r", "\n"}


def validate_age(value: int, *, what: str = "age") -> int:
    """Check an integer age label and return it."""
    if not isinstance(value, int) or isinstance(value, bool):
        raise OutOfRange(f"{what} must be an integer, got {value!r}")
    if value < 0 or value > AGE_MAX_SUPPORTED:
        raise OutOfRange(f"{what} {value} outside 0..{AGE_MAX_SUPPORTED}")
    return value


class AgeRange(enum.Enum):
    """The five age bands used as classification targets.

    Bands are disjoint, ordered, inclusive at both ends, and jointly
    cover ages 0..25.
    """

    B0_5 = (0, 5)
    B6_10 = (6, 10)
    B11_15 = (11, 15)
    B16_17 = (16, 17)
    B18_25 = (18, 25)

    @property
    def low(self) -> int:
        return self.value[0]

    @property
    def high(self) -> int:
        return self.value[1]

    @property
    def midpoint(self) -> float:
        return (self.value[0] + self.value[1]) / 2.0

    @property
    def label(self) -> str:
        return f"{self.value[0]}-{self.value[1]}"

    def __contains__(self, age: int) -> bool:
        return self.value[0] <= age <= self.value[1]


def band_of(age: int) -> AgeRange:
    """Band containing ``age``; defined on 0..25 only."""
    validate_age(age)
    if age > BAND_AGE_MAX:
        raise OutOfRange(f"age {age} above the banded range 0..{BAND_AGE_MAX}")
    for band in AgeRange:
        if age <= band.high:
            return band
    raise AssertionError("bands cover 0..25")  # pragma: no cover


class Gender(enum.Enum):
    FEMALE = "female"
    MALE = "male"
    UNKNOWN = "unknown"


class Source(enum.Enum):
    FLICKR = "flickr"
    UTKFACE = "utkface"
    IMDB = "imdb"
    WIKI = "wiki"
    FGNET = "fgnet"
    MEDS = "meds"
    SYNTHETIC = "synthetic"


def _check_plain_field(value: str, what: str) -> str:
    if not value:
        raise ValueError(f"{what} must be non-empty")
    if any(c in _CSV_UNSAFE for c in value):
        raise ValueError(f"{what} {value!r} contains characters reserved by the CSV schema")
    return value


@dataclass(frozen=True)
class SubjectRecord:
    """One labeled face image."""

    subject_id: str
    age: int
    gender: Gender = Gender.UNKNOWN
    source: Source = Source.SYNTHETIC
    license_tag: str = "unknown"
    image_ref: str = ""

    def __post_init__(self):
        _check_plain_field(self.subject_id, "subject_id")
        _check_plain_field(self.license_tag, "license_tag")
        validate_age(self.age)


@dataclass(frozen=True)
class Manifest:
    """A balanced, per-age-quota dataset listing.

    Invariant: for every age in ``declared_age_min..declared_age_max``
    the record list holds exactly ``per_age_quota`` records, so the total
    size is ``quota * (max - min + 1)``.
    """

    records: tuple[SubjectRecord, ...]
    declared_age_min: int
    declared_age_max: int
    per_age_quota: int

    def __post_init__(self):
        validate_age(self.declared_age_min, what="declared_age_min")
        validate_age(self.declared_age_max, what="declared_age_max")
        if self.declared_age_min > self.declared_age_max:
            raise OutOfRange("declared_age_min above declared_age_max")
        if self.per_age_quota < 1:
            raise UnbalancedManifest("per_age_quota must be positive")
        counts: dict[int, int] = {}
        seen: set[str] = set()
        for rec in self.records:
            if rec.subject_id in seen:
                raise DuplicateSubjectId(rec.subject_id)
            seen.add(rec.subject_id)
            if not self.declared_age_min <= rec.age <= self.declared_age_max:
                raise OutOfRange(
                    f"record {rec.subject_id!r} age {rec.age} outside declared "
                    f"range {self.declared_age_min}..{self.declared_age_max}"
                )
            counts[rec.age] = counts.get(rec.age, 0) + 1
        for age in range(self.declared_age_min, self.declared_age_max + 1):
            got = counts.get(age, 0)
            if got != self.per_age_quota:
                raise UnbalancedManifest(
                    f"age {age} has {got} records, quota is {self.per_age_quota}"
                )

    @classmethod
    def from_records(cls, records: list[SubjectRecord] | tuple[SubjectRecord, ...]) -> "Manifest":
        """Build a manifest, deriving range and quota from the records."""
        if not records:
            raise EmptyInput("cannot build a manifest from zero records")
        ages = [r.age for r in records]
        age_min, age_max = min(ages), max(ages)
        quota = ages.count(age_min)
        return cls(
            records=tuple(records),
            declared_age_min=age_min,
            declared_age_max=age_max,
            per_age_quota=quota,
        )

    def __len__(self) -> int:
        return len(self.records)

    def subject_ids(self) -> list[str]:
        return [r.subject_id for r in self.records]

    def age_by_subject(self) -> dict[str, int]:
        return {r.subject_id: r.age for r in self.records}


@dataclass(frozen=True)
class Prediction:
    """One estimator's output for one subject."""

    subject_id: str
    estimator_id: str
    point: float
    low: float | None = None
    high: float | None = None
    latency_ms: float | None = None
    raw_digest: str | None = None

    def __post_init__(self):
        _check_plain_field(self.subject_id, "subject_id")
        _check_plain_field(self.estimator_id, "estimator_id")
        if not math.isfinite(self.point) or self.point < 0:
            raise ValueError(f"point must be finite and >= 0, got {self.point!r}")
        # Services disagree on whether point sits inside [low, high];
        # only low <= high is required.
        if self.low is not None and self.high is not None and self.low > self.high:
            raise ValueError(f"low {self.low} > high {self.high}")
        if self.latency_ms is not None and (
            not math.isfinite(self.latency_ms) or self.latency_ms < 0
        ):
            raise ValueError(f"latency_ms must be non-negative, got {self.latency_ms!r}")
        if self.raw_digest is not None:
            if not self.raw_digest or any(
                c not in "0123456789abcdef" for c in self.raw_digest
            ):
                raise ValueError("raw_digest must be a lowercase hex string")
