"""Residuals of the chart identities and of the θ derivative formulas."""

import logging
import math
from typing import List, Optional

import numpy as np

from charflow.core.executor import parallel_map
from charflow.modules.catalog.services.catalog_service import ChartPreset
from charflow.modules.charts.config import ChartsConfig
from charflow.modules.charts.services.chart_service import Chart, ChartBuilder, build_chart
from charflow.modules.fields.services.frame_service import FrameField
from charflow.modules.fields.services.types import Point
from charflow.modules.report.services.convergence import estimate_order
from charflow.modules.report.services.report_service import make_entry, new_report
from charflow.modules.report.tolerances import TolerancePolicy, default_policy
from charflow.schemas.report import ReportEntry, VerificationReport

logger = logging.getLogger(__name__)

INTERIOR = (slice(2, -2), slice(2, -2))


def grid_gradient(Z: np.ndarray, h: float):
    """∂Z/∂ξ and ∂Z/∂η: 4th-order central stencil inside, 2nd-order one-sided at the rim."""
    gx, gy = np.gradient(Z, h, edge_order=2)
    gx[2:-2, :] = (-Z[4:, :] + 8.0 * Z[3:-1, :] - 8.0 * Z[1:-3, :] + Z[:-4, :]) / (12.0 * h)
    gy[:, 2:-2] = (-Z[:, 4:] + 8.0 * Z[:, 3:-1] - 8.0 * Z[:, 1:-3] + Z[:, :-4]) / (12.0 * h)
    return gx, gy


class _LocalFrame:
    """Frame quantities on the chart lattice, with vectors expressed in the rotated coordinates."""

    def __init__(self, chart: Chart, field: FrameField):
        X, Y = chart.X, chart.Y
        rot = chart.rotation
        self.theta = rot.local_angle(np.broadcast_to(field.theta(X, Y), X.shape))
        self.N = (np.cos(self.theta), np.sin(self.theta))
        self.Nperp = (np.sin(self.theta), -np.cos(self.theta))
        arrays = field.evaluate_arrays(X, Y)
        self.H = arrays.H
        self.D = arrays.D
        self.rotF = arrays.rotF
        # global components for position derivatives and directional offsets
        self.N_global = (arrays.N1, arrays.N2)
        self.Nperp_global = (arrays.N2, -arrays.N1)


def _interior(a: np.ndarray) -> np.ndarray:
    return np.asarray(a)[INTERIOR].ravel()


def _directional(chart: Chart, builder: ChartBuilder, which: str, direction, eps: float) -> np.ndarray:
    """Central difference of f (which="f") or g along a unit direction field, at interior points."""
    n = chart.n
    idx = [(i, j) for i in range(2, n - 2) for j in range(2, n - 2)]
    fn = builder.s_and_f if which == "f" else builder.t_and_g

    def one(ij):
        i, j = ij
        x, y = chart.X[i, j], chart.Y[i, j]
        dx, dy = direction[0][i, j], direction[1][i, j]
        plus = fn(Point(float(x + eps * dx), float(y + eps * dy)))[1]
        minus = fn(Point(float(x - eps * dx), float(y - eps * dy)))[1]
        return (plus - minus) / (2.0 * eps)

    return np.array(parallel_map(one, idx))


def _closed_form_entries(chart: Chart, preset: ChartPreset, field_name: str,
                         policy: TolerancePolicy) -> List[ReportEntry]:
    entries = []
    X, Y = chart.X, chart.Y
    for name, closed, values in (("s", preset.s, chart.s), ("f", preset.f, chart.f),
                                 ("t", preset.t, chart.t), ("g", preset.g, chart.g)):
        if closed is None or values is None:
            continue
        exact = np.broadcast_to(closed(X, Y), X.shape)
        entries.append(make_entry(f"charts.{name}_closed_form", f"{name} matches its closed form",
                                  np.abs(values - exact).ravel(), field_name, policy))
    return entries


def _retrace_entry(chart: Chart, builder: ChartBuilder, config: ChartsConfig, field_name: str,
                   policy: TolerancePolicy) -> ReportEntry:
    n = chart.n
    flat = np.linspace(0, n * n - 1, config.RETRACE_POINTS).round().astype(int)
    diffs = []
    for k in flat:
        i, j = divmod(int(k), n)
        q = Point(float(chart.X[i, j]), float(chart.Y[i, j]))
        diffs.append(abs(builder.s_and_f(q, chart.step / 2.0)[0] - chart.s[i, j]))
        if chart.has_t:
            diffs.append(abs(builder.t_and_g(q, chart.step / 2.0)[0] - chart.t[i, j]))
    return make_entry("charts.retrace", "coordinates do not depend on the trace discretization",
                      diffs, field_name, policy)


def _monotone_entry(chart: Chart, field_name: str, policy: TolerancePolicy) -> ReportEntry:
    violations = int(np.sum(np.diff(chart.s[:, chart.mid]) <= 0))
    if chart.has_t:
        violations += int(np.sum(np.diff(chart.t[chart.mid, :]) <= 0))
    return make_entry("charts.transversal_monotone", "s and t increase strictly along their transversals",
                      float(violations), field_name, policy)


def chart_residuals(chart: Chart, field: FrameField, preset: Optional[ChartPreset] = None,
                    policy: TolerancePolicy = default_policy, judged: bool = True) -> VerificationReport:
    """Gradient, transport, metric and positivity identities of a built chart."""
    config = ChartsConfig.from_env()
    name = field.name
    h = chart.spacing
    frame = _LocalFrame(chart, field)
    builder = ChartBuilder(field, chart.rotation, chart.radius, chart.step, config)
    eps = config.DIRECTIONAL_STEP
    entries: List[ReportEntry] = []

    def add(check, anchor, residuals, **kwargs):
        entries.append(make_entry(check, anchor, residuals, name, policy, judged=judged, **kwargs))

    s_a, s_b = grid_gradient(chart.s, h)
    add("charts.grad_s", "∇s = f N⊥",
        _interior(np.hypot(s_a - chart.f * frame.Nperp[0], s_b - chart.f * frame.Nperp[1])))
    add("charts.f_vs_grad_s", "|∇s| = f", _interior(np.abs(np.hypot(s_a, s_b) - chart.f)))
    Nf = _directional(chart, builder, "f", frame.N_global, eps)
    add("charts.transport_f", "N f + f H = 0", np.abs(Nf + _interior(chart.f * frame.H)))

    positive = chart.f > 0
    if chart.has_t:
        t_a, t_b = grid_gradient(chart.t, h)
        gD = chart.g * frame.D
        add("charts.grad_t", "∇t = g D N",
            _interior(np.hypot(t_a - gD * frame.N[0], t_b - gD * frame.N[1])))
        Ng = _directional(chart, builder, "g", frame.Nperp_global, eps)
        add("charts.transport_g", "N⊥ g + (rot F) g / D = 0",
            np.abs(Ng + _interior(frame.rotF * chart.g / frame.D)))

        def q(u, v):
            return ((s_a * u[0] + s_b * u[1]) * (s_a * v[0] + s_b * v[1]) / chart.f ** 2
                    + (t_a * u[0] + t_b * u[1]) * (t_a * v[0] + t_b * v[1]) / gD ** 2)

        metric = np.maximum.reduce([
            np.abs(q(frame.Nperp, frame.Nperp) - 1.0),
            np.abs(q(frame.N, frame.N) - 1.0),
            np.abs(q(frame.Nperp, frame.N)),
        ])
        add("charts.metric", "ds²/f² + dt²/(g²D²) is the flat metric", _interior(metric))
        det = s_a * t_b - s_b * t_a
        add("charts.jacobian_positive", "det ∂(s,t)/∂(x,y) = f g D > 0",
            float(np.mean(_interior(det) <= 0)))
        positive &= chart.g > 0
    add("charts.density_positive", "f > 0 and g > 0", float(np.mean(~positive)))
    entries.append(_retrace_entry(chart, builder, config, name, policy))
    entries.append(_monotone_entry(chart, name, policy))
    if preset is not None:
        entries.extend(_closed_form_entries(chart, preset, name, policy))

    logger.info(f"Chart residuals for {name}: {len(entries)} entries")
    return new_report(name, {"center": list(chart.center), "radius": chart.radius, "grid": chart.n},
                      entries)


def theta_derivative_checks(chart: Chart, field: FrameField, policy: TolerancePolicy = default_policy,
                            judged: bool = True) -> VerificationReport:
    """θ_s = −H/f, θ_t = rot F/(gD²) − N⊥(log D)/(gD), and x_st = x_ts, y_st = y_ts."""
    field.require_graph("θ_t identity")
    name = field.name
    h = chart.spacing
    frame = _LocalFrame(chart, field)
    gD = chart.g * frame.D

    def along_s(Z):
        za, zb = grid_gradient(Z, h)
        return (za * frame.Nperp[0] + zb * frame.Nperp[1]) / chart.f

    def along_t(Z):
        za, zb = grid_gradient(Z, h)
        return (za * frame.N[0] + zb * frame.N[1]) / gD

    theta_s = along_s(frame.theta)
    theta_t = along_t(frame.theta)

    def log_D(x, y):
        return np.log(field.D(x, y))

    Nperp_logD = field.derivative_along(log_D, chart.X, chart.Y, *frame.Nperp_global)
    rhs_t = frame.rotF / (gD * frame.D) - Nperp_logD / gD

    x_s = frame.Nperp_global[0] / chart.f
    y_s = frame.Nperp_global[1] / chart.f
    x_t = frame.N_global[0] / gD
    y_t = frame.N_global[1] / gD

    entries = [
        make_entry("theta.s_identity", "θ_s = −H / f", _interior(np.abs(theta_s + frame.H / chart.f)),
                   name, policy, judged=judged),
        make_entry("theta.t_identity", "θ_t = rot F/(g D²) − N⊥(log D)/(g D)",
                   _interior(np.abs(theta_t - rhs_t)), name, policy, judged=judged),
        make_entry("theta.mixed_x", "x_st = x_ts", _interior(np.abs(along_t(x_s) - along_s(x_t))),
                   name, policy, judged=judged),
        make_entry("theta.mixed_y", "y_st = y_ts", _interior(np.abs(along_t(y_s) - along_s(y_t))),
                   name, policy, judged=judged),
    ]
    return new_report(name, {"center": list(chart.center), "radius": chart.radius, "grid": chart.n},
                      entries)


def grad_s_refinement(field: FrameField, p0: Point, r: float, levels=(11, 21, 41),
                      policy: TolerancePolicy = default_policy) -> ReportEntry:
    """Max |∇s − f N⊥| over grids of increasing size at fixed radius."""
    errors = []
    for n in levels:
        chart = build_chart(field, p0, r, n)
        frame = _LocalFrame(chart, field)
        s_a, s_b = grid_gradient(chart.s, chart.spacing)
        err = _interior(np.hypot(s_a - chart.f * frame.Nperp[0], s_b - chart.f * frame.Nperp[1]))
        errors.append(float(np.max(err)))
    ratio = (levels[1] - 1) / (levels[0] - 1)
    order = estimate_order(errors, ratio)
    note = "errors " + ", ".join(f"{e:.3e}" for e in errors)
    logger.debug(f"Chart refinement for {field.name}: {note}")
    return make_entry("charts.grad_s_order", "∇s = f N⊥ under grid refinement", errors[-1],
                      field.name, policy, order=order, note=note)


def chart_summary(report: VerificationReport) -> dict:
    """check -> max residual, for the chart JSON."""
    return {e.check: (None if e.max_residual is None or not math.isfinite(e.max_residual) else e.max_residual)
            for e in report.entries}
