"""Chart identity and θ derivative verification suites."""

from typing import Optional, Tuple

from charflow.core.base_module import BaseModule, SuiteContext
from charflow.modules.charts.config import ChartsConfig
from charflow.modules.charts.services.chart_service import Chart, build_chart
from charflow.modules.charts.services.residuals import chart_residuals, grad_s_refinement, theta_derivative_checks
from charflow.modules.fields.services.types import Point
from charflow.modules.report.services.report_service import merge
from charflow.schemas.report import VerificationReport


def chart_settings(context: SuiteContext) -> Optional[Tuple[Point, float, int]]:
    """(center, radius, grid) from the run, falling back to the catalog preset."""
    run = context.config
    preset = context.entry.chart if context.entry is not None else None
    if run.center is None and preset is None:
        return None
    center = Point(*run.center) if run.center is not None else preset.anchor
    radius = run.radius or (preset.radius if preset is not None else None)
    grid = run.grid or (preset.grid if preset is not None else None)
    config = ChartsConfig.from_env()
    return center, radius or 0.25, grid or config.GRID


def _judged(context: SuiteContext) -> bool:
    return context.entry.smooth if context.entry is not None else True


def _build(context: SuiteContext) -> Chart:
    center, radius, grid = chart_settings(context)
    return build_chart(context.frame, center, radius, grid, context.config.step)


class ChartsSuite(BaseModule):
    """Gradient, transport and metric identities of the characteristic chart."""

    def __init__(self):
        super().__init__(
            name="charts",
            version="1.0.0",
            description="∇s = fN⊥, ∇t = gDN, transport of f and g, flat metric",
        )

    def applies_to(self, context: SuiteContext) -> bool:
        return chart_settings(context) is not None

    def run(self, context: SuiteContext) -> VerificationReport:
        chart = _build(context)
        preset = context.entry.chart if context.entry is not None and context.config.center is None else None
        report = chart_residuals(chart, context.frame, preset, context.policy, judged=_judged(context))
        if _judged(context):
            levels = tuple(context.config.levels or (11, 21, 41))
            refinement = grad_s_refinement(context.frame, chart.center, chart.radius, levels, context.policy)
            report = merge(report, VerificationReport(entries=[refinement], metadata={}))
        return report


class ThetaDerivativeSuite(BaseModule):
    """θ_s, θ_t and the mixed partials of the chart map; graph-mode fields only."""

    def __init__(self):
        super().__init__(
            name="theta-t",
            version="1.0.0",
            description="θ_s = −H/f, θ_t formula, x_st = x_ts",
            dependencies=["charts"],
        )

    def applies_to(self, context: SuiteContext) -> bool:
        return context.frame.is_graph and chart_settings(context) is not None

    def run(self, context: SuiteContext) -> VerificationReport:
        chart = _build(context)
        return theta_derivative_checks(chart, context.frame, context.policy, judged=_judged(context))
