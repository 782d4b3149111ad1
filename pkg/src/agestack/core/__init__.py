"""Domain types, age-band taxonomy, balanced curation, and manifest I/O."""

from agestack.core.types import (
    AGE_MAX_SUPPORTED,
    AgeRange,
    Gender,
    Manifest,
    Prediction,
    Source,
    SubjectRecord,
    band_of,
    validate_age,
)
from agestack.core.curation import curate_balanced
from agestack.core.io import (
    format_real,
    parse_manifest,
    parse_predictions,
    parse_records,
    read_manifest,
    read_predictions,
    read_records,
    render_manifest,
    render_predictions,
    render_records,
    write_manifest,
    write_predictions,
)

__all__ = [
    "AGE_MAX_SUPPORTED",
    "AgeRange",
    "Gender",
    "Manifest",
    "Prediction",
    "Source",
    "SubjectRecord",
    "band_of",
    "validate_age",
    "curate_balanced",
    "format_real",
    "parse_manifest",
    "parse_predictions",
    "parse_records",
    "read_manifest",
    "read_predictions",
    "read_records",
    "render_manifest",
    "render_predictions",
    "render_records",
    "write_manifest",
    "write_predictions",
]
