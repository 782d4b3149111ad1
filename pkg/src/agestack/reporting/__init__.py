"""Tables and figure renderers for evaluation output."""

from agestack.reporting.figures import (
    bar_chart,
    fig_band_accuracy,
    fig_mae_by_age,
    fig_mean_by_age,
    line_chart,
    mean_prediction_per_age,
)
from agestack.reporting.tables import (
    render_band_table_csv,
    render_band_table_text,
    render_mae_table_csv,
    render_mae_table_text,
)

__all__ = [
    "bar_chart",
    "fig_band_accuracy",
    "fig_mae_by_age",
    "fig_mean_by_age",
    "line_chart",
    "mean_prediction_per_age",
    "render_band_table_csv",
    "render_band_table_text",
    "render_mae_table_csv",
    "render_mae_table_text",
]
