"""Figure data and hand-rolled SVG charts.

Three figures: mean predicted age per real age (with the identity line
as the "perfect estimator" reference), MAE per real age, and accuracy
per age band. Each figure is a CSV of the plotted values plus a
self-contained SVG with no external assets, no scripts, and no
timestamps, so reruns are byte-identical.
"""

from __future__ import annotations

from collections import defaultdict
from typing import Mapping, Sequence

from agestack.core.io import format_real
from agestack.core.types import AgeRange
from agestack.errors import EmptyInput
from agestack.metrics import BandAccuracyTable, PairedSample, mae_per_age

# Fixed series palette; position in the declared estimator order picks
# the color, so a rerun with the same order recolors nothing.
PALETTE = (
    "#1f77b4",
    "#d62728",
    "#2ca02c",
    "#9467bd",
    "#ff7f0e",
    "#8c564b",
    "#17becf",
    "#7f7f7f",
)

CHART_W = 640.0
CHART_H = 400.0
MARGIN_LEFT = 52.0
MARGIN_RIGHT = 150.0
MARGIN_TOP = 34.0
MARGIN_BOTTOM = 42.0


def mean_prediction_per_age(samples: Sequence[PairedSample]) -> dict[int, float]:
    """Average predicted age grouped by real age, ascending by age."""
    if not samples:
        raise EmptyInput("mean_prediction_per_age needs at least one sample")
    sums: dict[int, float] = defaultdict(float)
    counts: dict[int, int] = defaultdict(int)
    for sample in samples:
        sums[sample.real] += sample.predicted
        counts[sample.real] += 1
    return {age: sums[age] / counts[age] for age in sorted(sums)}


def _series_csv(x_name: str, xs: Sequence, series: Mapping[str, Sequence[float]]) -> str:
    lines = [",".join([x_name] + list(series))]
    for i, x in enumerate(xs):
        cells = [str(x)] + [format_real(series[name][i]) for name in series]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _axis_bounds(values: Sequence[float]) -> tuple[float, float]:
    lo, hi = min(values), max(values)
    if lo > 0:
        lo = 0.0
    if hi <= lo:
        hi = lo + 1.0
    return lo, hi


def _svg_open(title: str) -> list[str]:
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {_fmt(CHART_W)} {_fmt(CHART_H)}" '
        'font-family="Helvetica, Arial, sans-serif" font-size="11">',
        f'<rect x="0" y="0" width="{_fmt(CHART_W)}" height="{_fmt(CHART_H)}" fill="#ffffff"/>',
        f'<text x="{_fmt(CHART_W / 2)}" y="20" text-anchor="middle" font-size="14">{title}</text>',
    ]


def _svg_axes(x_label: str, y_label: str, y_lo: float, y_hi: float) -> list[str]:
    x0, x1 = MARGIN_LEFT, CHART_W - MARGIN_RIGHT
    y0, y1 = CHART_H - MARGIN_BOTTOM, MARGIN_TOP
    parts = [
        f'<line x1="{_fmt(x0)}" y1="{_fmt(y0)}" x2="{_fmt(x1)}" y2="{_fmt(y0)}" stroke="#222222"/>',
        f'<line x1="{_fmt(x0)}" y1="{_fmt(y0)}" x2="{_fmt(x0)}" y2="{_fmt(y1)}" stroke="#222222"/>',
        f'<text x="{_fmt((x0 + x1) / 2)}" y="{_fmt(CHART_H - 8)}" text-anchor="middle">{x_label}</text>',
        f'<text x="14" y="{_fmt((y0 + y1) / 2)}" text-anchor="middle" '
        f'transform="rotate(-90 14 {_fmt((y0 + y1) / 2)})">{y_label}</text>',
    ]
    for i in range(5):
        frac = i / 4.0
        value = y_lo + (y_hi - y_lo) * frac
        y = y0 - (y0 - y1) * frac
        parts.append(
            f'<line x1="{_fmt(x0 - 4)}" y1="{_fmt(y)}" x2="{_fmt(x0)}" y2="{_fmt(y)}" stroke="#222222"/>'
        )
        parts.append(
            f'<text x="{_fmt(x0 - 7)}" y="{_fmt(y + 3.5)}" text-anchor="end">{format_real(round(value, 2))}</text>'
        )
    return parts


def _svg_legend(names: Sequence[str]) -> list[str]:
    x = CHART_W - MARGIN_RIGHT + 14
    parts = []
    for i, name in enumerate(names):
        y = MARGIN_TOP + 8 + i * 16
        color = PALETTE[i % len(PALETTE)]
        parts.append(
            f'<rect x="{_fmt(x)}" y="{_fmt(y - 7)}" width="10" height="10" fill="{color}"/>'
        )
        parts.append(f'<text x="{_fmt(x + 15)}" y="{_fmt(y + 2)}">{name}</text>')
    return parts


def line_chart(
    title: str,
    x_label: str,
    y_label: str,
    xs: Sequence[float],
    series: Mapping[str, Sequence[float]],
    identity_line: bool = False,
) -> str:
    all_values = [v for values in series.values() for v in values]
    if identity_line:
        all_values = all_values + [float(x) for x in xs]
    y_lo, y_hi = _axis_bounds(all_values)
    x_lo, x_hi = float(min(xs)), float(max(xs))
    if x_hi <= x_lo:
        x_hi = x_lo + 1.0

    plot_x0, plot_x1 = MARGIN_LEFT, CHART_W - MARGIN_RIGHT
    plot_y0, plot_y1 = CHART_H - MARGIN_BOTTOM, MARGIN_TOP

    def sx(x: float) -> float:
        return plot_x0 + (plot_x1 - plot_x0) * (x - x_lo) / (x_hi - x_lo)

    def sy(y: float) -> float:
        return plot_y0 - (plot_y0 - plot_y1) * (y - y_lo) / (y_hi - y_lo)

    parts = _svg_open(title)
    parts.extend(_svg_axes(x_label, y_label, y_lo, y_hi))
    for x in xs:
        parts.append(
            f'<line x1="{_fmt(sx(x))}" y1="{_fmt(plot_y0)}" x2="{_fmt(sx(x))}" '
            f'y2="{_fmt(plot_y0 + 4)}" stroke="#222222"/>'
        )
        if int(x) % 5 == 0:
            parts.append(
                f'<text x="{_fmt(sx(x))}" y="{_fmt(plot_y0 + 16)}" text-anchor="middle">{int(x)}</text>'
            )
    if identity_line:
        parts.append(
            f'<line x1="{_fmt(sx(x_lo))}" y1="{_fmt(sy(x_lo))}" x2="{_fmt(sx(x_hi))}" '
            f'y2="{_fmt(sy(x_hi))}" stroke="#999999" stroke-dasharray="4 3"/>'
        )
    for i, (name, values) in enumerate(series.items()):
        color = PALETTE[i % len(PALETTE)]
        points = " ".join(f"{_fmt(sx(x))},{_fmt(sy(v))}" for x, v in zip(xs, values))
        parts.append(
            f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{points}"/>'
        )
    legend = list(series)
    if identity_line:
        legend = legend + ["real age"]
        i = len(series)
        x = CHART_W - MARGIN_RIGHT + 14
        y = MARGIN_TOP + 8 + i * 16
        parts.extend(_svg_legend(list(series)))
        parts.append(
            f'<line x1="{_fmt(x)}" y1="{_fmt(y - 2)}" x2="{_fmt(x + 10)}" y2="{_fmt(y - 2)}" '
            'stroke="#999999" stroke-dasharray="4 3"/>'
        )
        parts.append(f'<text x="{_fmt(x + 15)}" y="{_fmt(y + 2)}">real age</text>')
    else:
        parts.extend(_svg_legend(legend))
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def bar_chart(
    title: str,
    x_label: str,
    y_label: str,
    categories: Sequence[str],
    series: Mapping[str, Sequence[float]],
) -> str:
    all_values = [v for values in series.values() for v in values]
    y_lo, y_hi = _axis_bounds(all_values)

    plot_x0, plot_x1 = MARGIN_LEFT, CHART_W - MARGIN_RIGHT
    plot_y0, plot_y1 = CHART_H - MARGIN_BOTTOM, MARGIN_TOP
    slot = (plot_x1 - plot_x0) / len(categories)
    bar_w = slot * 0.8 / max(len(series), 1)

    def sy(y: float) -> float:
        return plot_y0 - (plot_y0 - plot_y1) * (y - y_lo) / (y_hi - y_lo)

    parts = _svg_open(title)
    parts.extend(_svg_axes(x_label, y_label, y_lo, y_hi))
    for c, category in enumerate(categories):
        center = plot_x0 + slot * (c + 0.5)
        parts.append(
            f'<text x="{_fmt(center)}" y="{_fmt(plot_y0 + 16)}" text-anchor="middle">{category}</text>'
        )
        for i, (name, values) in enumerate(series.items()):
            color = PALETTE[i % len(PALETTE)]
            x = center - slot * 0.4 + i * bar_w
            top = sy(values[c])
            parts.append(
                f'<rect x="{_fmt(x)}" y="{_fmt(top)}" width="{_fmt(bar_w)}" '
                f'height="{_fmt(plot_y0 - top)}" fill="{color}"/>'
            )
    parts.extend(_svg_legend(list(series)))
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def fig_mean_by_age(
    samples_by_estimator: Mapping[str, Sequence[PairedSample]]
) -> tuple[str, str]:
    """CSV + SVG of mean predicted age per real age, per estimator."""
    per_est = {e: mean_prediction_per_age(s) for e, s in samples_by_estimator.items()}
    ages = sorted({age for curve in per_est.values() for age in curve})
    series = {e: [curve[a] for a in ages] for e, curve in per_est.items()}
    csv = _series_csv("age", ages, series)
    svg = line_chart(
        "Mean estimated age by real age",
        "real age",
        "mean estimated age",
        [float(a) for a in ages],
        series,
        identity_line=True,
    )
    return csv, svg


def fig_mae_by_age(
    samples_by_estimator: Mapping[str, Sequence[PairedSample]]
) -> tuple[str, str]:
    """CSV + SVG of MAE per real age, per estimator."""
    per_est = {e: mae_per_age(s) for e, s in samples_by_estimator.items()}
    ages = sorted({age for curve in per_est.values() for age in curve})
    series = {e: [curve[a] for a in ages] for e, curve in per_est.items()}
    csv = _series_csv("age", ages, series)
    svg = line_chart(
        "MAE by real age", "real age", "MAE (years)", [float(a) for a in ages], series
    )
    return csv, svg


def fig_band_accuracy(tables: Mapping[str, BandAccuracyTable]) -> tuple[str, str]:
    """CSV + SVG of per-band accuracy, one bar group per band."""
    bands = list(AgeRange)
    series = {e: [t.per_band.get(b, 0.0) for b in bands] for e, t in tables.items()}
    labels = ["[" + b.label + "]" for b in bands]
    csv = _series_csv("band", labels, series)
    svg = bar_chart("Accuracy by age band", "age band", "accuracy", labels, series)
    return csv, svg
