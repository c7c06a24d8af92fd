"""Command handlers; each returns a process exit code."""

import asyncio
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

import numpy as np
from rich.console import Console
from rich.table import Table

from charflow.core.base_module import SuiteContext
from charflow.core.exceptions import TooShortError, UsageError
from charflow.core.module_manager import build_default_manager
from charflow.modules.catalog.services.catalog_service import CatalogEntry, get, list_entries, resolve
from charflow.modules.charts.module import chart_settings
from charflow.modules.charts.services.chart_service import build_chart, chart_to_model
from charflow.modules.charts.services.residuals import chart_residuals, chart_summary
from charflow.modules.exprlang.services.parser import parse
from charflow.modules.fields.services.types import CurveKind, Point
from charflow.modules.flux.module import polygons_for
from charflow.modules.flux.services.flux_checks import flux_checks
from charflow.modules.report.services.report_service import make_entry, new_report, render_text
from charflow.modules.report.tolerances import TolerancePolicy
from charflow.modules.tracer.services.curve import curve_to_csv
from charflow.modules.tracer.services.tracer_service import CurveTracer, curvature_profile
from charflow.modules.variational.services.variational_service import (
    GraphCurve,
    curve_from_function,
    euler_lagrange_residual,
    eval_LH,
    minimize_LH,
    to_curve,
)
from charflow.schemas.report import VerificationReport
from charflow.schemas.run_config import RunConfig

logger = logging.getLogger(__name__)


def emit(text: str, out: Optional[str]) -> None:
    """Write to the output path, or stdout when there is none."""
    if out:
        Path(out).write_text(text, encoding="utf-8")
        logger.info(f"Wrote {out}")
    else:
        sys.stdout.write(text)


def emit_report(report: VerificationReport, run: RunConfig, out: Optional[str]) -> None:
    if run.format == "text":
        if out:
            with open(out, "w", encoding="utf-8") as fh:
                render_text(report, Console(file=fh, width=160, color_system=None))
        else:
            render_text(report, Console(width=160))
    else:
        emit(report.model_dump_json(indent=2) + "\n", out)


def _with_run(report: VerificationReport, run: RunConfig) -> VerificationReport:
    metadata = dict(report.metadata)
    metadata["run_config"] = run.model_dump(mode="json", exclude_none=True)
    return VerificationReport(entries=report.entries, metadata=dict(sorted(metadata.items())))


def _exit_code(report: VerificationReport) -> int:
    return 0 if report.passed else 1


def _require_field(run: RunConfig):
    if not run.field:
        raise UsageError("--field is required")
    return resolve(run.field)


def cmd_trace(run: RunConfig, policy: TolerancePolicy) -> int:
    frame, entry = _require_field(run)
    if run.start is None:
        raise UsageError("--start x,y is required")
    start = Point.of(*run.start)
    tracer = CurveTracer(frame)
    kind = CurveKind(run.kind)
    box = entry.box if entry is not None else None
    if run.back:
        if run.arclen <= 0:
            raise UsageError("--arclen must be positive together with --back")
        curve = tracer.trace_bidirectional(start, kind, run.back, run.arclen, run.step, box)
    else:
        curve = tracer.trace(start, kind, run.arclen, run.step, box)
    try:
        curve = curvature_profile(curve)
    except TooShortError:
        logger.warning(f"Trace has {len(curve)} samples; κ column left empty")
    emit(curve_to_csv(curve), run.out)
    logger.info(f"Trace of {frame.name} from {start}: {len(curve)} samples, exit {curve.exit_event.value}")
    return 0


def cmd_chart(run: RunConfig, policy: TolerancePolicy) -> int:
    frame, entry = _require_field(run)
    context = SuiteContext(frame=frame, entry=entry, run=run, policy=policy)
    settings = chart_settings(context)
    if settings is None:
        raise UsageError("--center x,y is required for fields without a catalog chart preset")
    center, radius, grid = settings
    chart = build_chart(frame, center, radius, grid, run.step)
    preset = entry.chart if entry is not None and run.center is None else None
    judged = entry.smooth if entry is not None else True
    report = _with_run(chart_residuals(chart, frame, preset, policy, judged), run)
    emit(chart_to_model(chart, chart_summary(report)).model_dump_json(indent=2) + "\n", run.out)
    if run.report:
        emit_report(report, run, run.report)
    return _exit_code(report)


def _initial_curve(run: RunConfig) -> GraphCurve:
    if run.start is None or run.end is None:
        raise UsageError("--start x0,y0 and --end x1,y1 are required")
    (x0, y0), (x1, y1) = run.start, run.end
    if run.initial:
        expr = parse(run.initial)
        if "y" in expr.variables():
            raise UsageError("--initial is a height profile in x only")
        c = curve_from_function(lambda x: np.broadcast_to(expr.evaluate(x, np.zeros_like(x)), x.shape),
                                x0, x1, run.nodes)
        y = c.y.copy()
        y[0], y[-1] = y0, y1
        return GraphCurve(x0, x1, y)
    return curve_from_function(lambda x: y0 + (y1 - y0) * (x - x0) / (x1 - x0), x0, x1, run.nodes)


def cmd_minimize(run: RunConfig, policy: TolerancePolicy) -> int:
    if run.H:
        H = parse(run.H)
        name = f"H = {run.H}"
    else:
        H, _ = _require_field(run)
        name = H.name
    c0 = _initial_curve(run)
    minimizer = minimize_LH(c0, H, run.min_tol, run.max_iters)
    emit(curve_to_csv(to_curve(minimizer, H)), run.out)
    residual = np.abs(euler_lagrange_residual(minimizer, H))
    entry = make_entry("variational.euler_lagrange", "(y'/√(1+y'²))' + H = 0 at the minimizer", residual,
                       name, policy, note=f"L_H = {eval_LH(minimizer, H):.17g}")
    report = _with_run(new_report(name, {"nodes": minimizer.n}, [entry]), run)
    if run.report:
        emit_report(report, run, run.report)
    return _exit_code(report)


def cmd_flux(run: RunConfig, policy: TolerancePolicy) -> int:
    frame, entry = _require_field(run)
    context = SuiteContext(frame=frame, entry=entry, run=run, policy=policy)
    polygons = polygons_for(context)
    if not polygons:
        raise UsageError("--polygon is required for fields without catalog polygons")
    phi = parse(run.phi) if run.phi else None
    smooth = entry.smooth if entry is not None else True
    report = _with_run(flux_checks(frame, polygons, phi, policy, smooth), run)
    emit_report(report, run, run.out)
    return _exit_code(report)


def list_suites() -> None:
    manager = build_default_manager()
    table = Table(title="Verification suites")
    table.add_column("Suite", style="cyan")
    table.add_column("Depends on")
    table.add_column("Checks")
    for info in manager.get_modules_info():
        table.add_row(info["name"], ", ".join(info["dependencies"]) or "-", info["description"])
    Console().print(table)


def _contexts(run: RunConfig, policy: TolerancePolicy) -> List[SuiteContext]:
    sources = [run.field] if run.field else list_entries()
    contexts = []
    for source in sources:
        frame, entry = resolve(source)
        contexts.append(SuiteContext(frame=frame, entry=entry, run=run, policy=policy))
    return contexts


def cmd_verify(run: RunConfig, policy: TolerancePolicy, suite: Optional[str], list_only: bool) -> int:
    if list_only:
        list_suites()
        return 0
    if suite is None:
        raise UsageError("name a suite (theorem-a, charts, theta-t, flux, funnel, all) or pass --list")
    manager = build_default_manager()
    report = asyncio.run(manager.run_suites([suite], _contexts(run, policy)))
    report = _with_run(report, run)
    emit_report(report, run, run.out)
    failures = report.failures()
    if failures:
        logger.error(f"{len(failures)} check(s) failed: {', '.join(e.check for e in failures)}")
    return _exit_code(report)


def _entry_row(entry: CatalogEntry) -> dict:
    return {
        "name": entry.name,
        "mode": entry.mode,
        "description": entry.description,
        "validity": entry.validity,
        "characteristics": entry.characteristic_family,
        "seeds": entry.seed_family,
        "smooth": entry.smooth,
    }


def cmd_catalog(run: RunConfig, action: str, name: Optional[str]) -> int:
    if action == "show":
        if not name:
            raise UsageError("catalog show needs an entry name")
        rows = [_entry_row(get(name))]
    else:
        rows = [_entry_row(get(n)) for n in list_entries()]
    if run.format == "json":
        emit(json.dumps(rows, indent=2) + "\n", run.out)
        return 0
    table = Table(title="Field catalog")
    for column in ("name", "mode", "description", "validity"):
        table.add_column(column.capitalize(), style="cyan" if column == "name" else None)
    for row in rows:
        table.add_row(row["name"], row["mode"], row["description"], row["validity"])
    Console().print(table)
    return 0
