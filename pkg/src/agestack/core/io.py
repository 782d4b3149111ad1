"""Manifest and predictions CSV schemas.

Both formats are UTF-8 with LF line endings and a fixed header row.
The constrained columns never need quoting (their values are validated
against the reserved characters); ``image_ref`` is the one free-form
column and gets RFC-4180 quoting when required. Real values are printed
with at most six fractional digits, trailing zeros trimmed, which keeps
files byte-stable for a fixed input.
"""

from __future__ import annotations

import csv
import io
import math
import os
from pathlib import Path
from typing import Iterable, Sequence

from agestack.core.types import Gender, Manifest, Prediction, Source, SubjectRecord
from agestack.errors import DuplicateSubjectId, SchemaError

MANIFEST_HEADER = ["subject_id", "age", "gender", "source", "license_tag", "image_ref"]
PREDICTIONS_HEADER = [
    "subject_id",
    "estimator_id",
    "point",
    "low",
    "high",
    "latency_ms",
    "raw_digest",
]

_NEEDS_QUOTING = (",", '"', "\r", "\n")


def format_real(x: float) -> str:
    """Decimal rendering with at most six fractional digits."""
    s = f"{x:.6f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _quote_if_needed(cell: str) -> str:
    if any(c in cell for c in _NEEDS_QUOTING):
        return '"' + cell.replace('"', '""') + '"'
    return cell


def _parse_int(cell: str, line: int, column: str) -> int:
    try:
        return int(cell)
    except ValueError:
        raise SchemaError(line, column, f"not an integer: {cell!r}") from None


def _parse_real(cell: str, line: int, column: str) -> float:
    try:
        value = float(cell)
    except ValueError:
        raise SchemaError(line, column, f"not a number: {cell!r}") from None
    if not math.isfinite(value):
        raise SchemaError(line, column, f"not finite: {cell!r}")
    return value


def _parse_optional_real(cell: str, line: int, column: str) -> float | None:
    return None if cell == "" else _parse_real(cell, line, column)


# ---------------------------------------------------------------- manifest


def render_records(records: Iterable[SubjectRecord]) -> str:
    lines = [",".join(MANIFEST_HEADER)]
    for rec in records:
        lines.append(
            ",".join(
                (
                    rec.subject_id,
                    str(rec.age),
                    rec.gender.value,
                    rec.source.value,
                    rec.license_tag,
                    _quote_if_needed(rec.image_ref),
                )
            )
        )
    return "\n".join(lines) + "\n"


def render_manifest(manifest: Manifest) -> str:
    return render_records(manifest.records)


def parse_records(text: str) -> list[SubjectRecord]:
    """Parse manifest-schema rows without imposing the balance invariant."""
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise SchemaError(None, None, "empty file") from None
    if header != MANIFEST_HEADER:
        raise SchemaError(1, None, f"bad header {header!r}")
    records: list[SubjectRecord] = []
    seen: set[str] = set()
    for row in reader:
        line = reader.line_num
        if not row:
            continue
        if len(row) != len(MANIFEST_HEADER):
            raise SchemaError(line, None, f"expected {len(MANIFEST_HEADER)} fields, got {len(row)}")
        subject_id, age_s, gender_s, source_s, license_tag, image_ref = row
        if subject_id in seen:
            raise DuplicateSubjectId(subject_id)
        seen.add(subject_id)
        try:
            gender = Gender(gender_s)
        except ValueError:
            raise SchemaError(line, "gender", f"unknown gender {gender_s!r}") from None
        try:
            source = Source(source_s)
        except ValueError:
            raise SchemaError(line, "source", f"unknown source {source_s!r}") from None
        try:
            records.append(
                SubjectRecord(
                    subject_id=subject_id,
                    age=_parse_int(age_s, line, "age"),
                    gender=gender,
                    source=source,
                    license_tag=license_tag,
                    image_ref=image_ref,
                )
            )
        except (ValueError, SchemaError) as exc:
            if isinstance(exc, SchemaError):
                raise
            raise SchemaError(line, None, str(exc)) from None
    return records


def parse_manifest(text: str) -> Manifest:
    return Manifest.from_records(parse_records(text))


def write_manifest(manifest: Manifest, path: str | Path) -> None:
    Path(path).write_text(render_manifest(manifest), encoding="utf-8", newline="")


def read_manifest(path: str | Path) -> Manifest:
    return parse_manifest(Path(path).read_text(encoding="utf-8"))


def read_records(path: str | Path) -> list[SubjectRecord]:
    return parse_records(Path(path).read_text(encoding="utf-8"))


# ------------------------------------------------------------- predictions


def render_predictions(predictions: Iterable[Prediction]) -> str:
    lines = [",".join(PREDICTIONS_HEADER)]
    for pred in predictions:
        lines.append(
            ",".join(
                (
                    pred.subject_id,
                    pred.estimator_id,
                    format_real(pred.point),
                    "" if pred.low is None else format_real(pred.low),
                    "" if pred.high is None else format_real(pred.high),
                    "" if pred.latency_ms is None else format_real(pred.latency_ms),
                    "" if pred.raw_digest is None else pred.raw_digest,
                )
            )
        )
    return "\n".join(lines) + "\n"


def parse_predictions(text: str) -> list[Prediction]:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise SchemaError(None, None, "empty file") from None
    if header != PREDICTIONS_HEADER:
        raise SchemaError(1, None, f"bad header {header!r}")
    predictions: list[Prediction] = []
    seen: set[tuple[str, str]] = set()
    for row in reader:
        line = reader.line_num
        if not row:
            continue
        if len(row) != len(PREDICTIONS_HEADER):
            raise SchemaError(
                line, None, f"expected {len(PREDICTIONS_HEADER)} fields, got {len(row)}"
            )
        subject_id, estimator_id, point_s, low_s, high_s, latency_s, digest = row
        key = (subject_id, estimator_id)
        if key in seen:
            raise SchemaError(line, None, f"duplicate prediction for {key!r}")
        seen.add(key)
        try:
            predictions.append(
                Prediction(
                    subject_id=subject_id,
                    estimator_id=estimator_id,
                    point=_parse_real(point_s, line, "point"),
                    low=_parse_optional_real(low_s, line, "low"),
                    high=_parse_optional_real(high_s, line, "high"),
                    latency_ms=_parse_optional_real(latency_s, line, "latency_ms"),
                    raw_digest=digest or None,
                )
            )
        except ValueError as exc:
            raise SchemaError(line, None, str(exc)) from None
    return predictions


def write_predictions(predictions: Iterable[Prediction], path: str | Path) -> None:
    Path(path).write_text(render_predictions(predictions), encoding="utf-8", newline="")


def read_predictions(path: str | Path) -> list[Prediction]:
    return parse_predictions(Path(path).read_text(encoding="utf-8"))


def write_text_atomic(path: str | Path, content: str) -> None:
    """Write via temp file + rename so readers never see partial output."""
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(content, encoding="utf-8", newline="")
    os.replace(tmp, path)
