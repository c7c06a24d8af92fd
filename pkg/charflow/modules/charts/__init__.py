"""Charts module."""

from charflow.modules.charts.services.chart_service import (
    Chart,
    ChartBuilder,
    build_chart,
    chart_from_model,
    chart_to_model,
)
from charflow.modules.charts.services.residuals import (
    chart_residuals,
    chart_summary,
    grad_s_refinement,
    grid_gradient,
    theta_derivative_checks,
)

__all__ = [
    "Chart",
    "ChartBuilder",
    "build_chart",
    "chart_from_model",
    "chart_residuals",
    "chart_summary",
    "chart_to_model",
    "grad_s_refinement",
    "grid_gradient",
    "theta_derivative_checks",
]
