"""Evaluation tables: MAE ranking and per-band accuracy, CSV and text.

The text renderings mirror the published layout: one row per estimator,
a `*` marking the best value in each band column. Values print with
three fractional digits; CSV output keeps full precision.
"""

from __future__ import annotations

from typing import Mapping, Sequence

from agestack.core.io import format_real
from agestack.core.types import AgeRange
from agestack.metrics import BandAccuracyTable

RankedMae = Sequence[tuple[str, float]]


def render_mae_table_csv(ranked: RankedMae) -> str:
    lines = ["estimator_id,mae"]
    for estimator_id, value in ranked:
        lines.append(f"{estimator_id},{format_real(value)}")
    return "\n".join(lines) + "\n"


def render_mae_table_text(ranked: RankedMae) -> str:
    width = max([len("Estimator")] + [len(e) for e, _ in ranked])
    lines = [f"{'Estimator':<{width}}  {'MAE':>7}"]
    for estimator_id, value in ranked:
        lines.append(f"{estimator_id:<{width}}  {value:7.3f}")
    return "\n".join(lines) + "\n"


def _band_columns() -> list[AgeRange]:
    return list(AgeRange)


def _csv_band_key(band: AgeRange) -> str:
    return "acc_" + band.label.replace("-", "_")


def render_band_table_csv(tables: Mapping[str, BandAccuracyTable]) -> str:
    bands = _band_columns()
    header = ["estimator_id"] + [_csv_band_key(b) for b in bands] + ["avg"]
    lines = [",".join(header)]
    for estimator_id, table in tables.items():
        cells = [estimator_id]
        for band in bands:
            value = table.per_band.get(band)
            cells.append("" if value is None else format_real(value))
        cells.append(format_real(table.average))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def render_band_table_text(tables: Mapping[str, BandAccuracyTable]) -> str:
    """Fixed-width band accuracies with `*` on each band's best row."""
    bands = _band_columns()
    best: dict[AgeRange, float] = {}
    for band in bands:
        values = [t.per_band[band] for t in tables.values() if band in t.per_band]
        if values:
            best[band] = max(values)

    width = max([len("Estimator")] + [len(e) for e in tables])
    header = [f"{'Estimator':<{width}}"]
    for band in bands:
        header.append(f"{'[' + band.label + ']':>9}")
    header.append(f"{'AVG':>9}")
    lines = ["  ".join(header)]
    for estimator_id, table in tables.items():
        row = [f"{estimator_id:<{width}}"]
        for band in bands:
            value = table.per_band.get(band)
            if value is None:
                row.append(f"{'-':>9}")
                continue
            mark = "*" if value == best[band] else " "
            row.append(f"{value:8.3f}{mark}")
        row.append(f"{table.average:8.3f} ")
        lines.append("  ".join(row))
    return "\n".join(line.rstrip() for line in lines) + "\n"
