"""Building, merging, serializing and rendering verification reports."""

import datetime
import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, Iterable, Optional, Sequence, Union

import numpy as np
from rich.console import Console
from rich.table import Table

from charflow import __version__
from charflow.modules.report.services.convergence import OrderEstimate
from charflow.modules.report.tolerances import TolerancePolicy, default_policy
from charflow.schemas.report import ReportEntry, VerificationReport

logger = logging.getLogger(__name__)


def _finite_or_none(v: float) -> Optional[float]:
    v = float(v)
    return v if math.isfinite(v) else None


def make_entry(
    check: str,
    anchor: str,
    residuals: Union[Sequence[float], np.ndarray, float],
    field: Optional[str] = None,
    policy: TolerancePolicy = default_policy,
    order: Optional[OrderEstimate] = None,
    judged: bool = True,
    note: Optional[str] = None,
) -> ReportEntry:
    """Entry from raw residuals; passed iff judged, finite, max ≤ tolerance and the order requirement holds."""
    r = np.atleast_1d(np.asarray(residuals, dtype=float))
    tol = policy.tolerance(check, field)
    if r.size == 0:
        max_r = mean_r = None
    else:
        max_r = _finite_or_none(np.max(r)) if np.all(np.isfinite(r)) else None
        mean_r = _finite_or_none(np.mean(r)) if np.all(np.isfinite(r)) else None
    if tol is None:
        judged = False

    passed = False
    notes = [note] if note else []
    if judged and max_r is not None:
        passed = max_r <= tol
        if order is not None:
            minimum = policy.min_order(check)
            if not order.meets(minimum):
                passed = False
                notes.append(f"order below {minimum}")
            if order.saturated:
                notes.append("refinement study saturated at round-off")
    if r.size and max_r is None:
        notes.append("non-finite residual")

    report_order = None
    levels = None
    if order is not None:
        levels = order.levels
        if order.order is not None and order.levels >= 3:
            report_order = order.order
    return ReportEntry(
        check=check,
        anchor=anchor,
        field=field,
        n_samples=int(r.size),
        max_residual=max_r,
        mean_residual=mean_r,
        tolerance=tol,
        passed=passed,
        judged=judged,
        convergence_order=report_order,
        refinement_levels=levels,
        note="; ".join(notes) or None,
    )


def new_report(field: Optional[str] = None, parameters: Optional[Dict[str, Any]] = None,
               entries: Iterable[ReportEntry] = ()) -> VerificationReport:
    metadata: Dict[str, Any] = {
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "version": __version__,
    }
    if field is not None:
        metadata["field"] = field
    if parameters:
        metadata["parameters"] = parameters
    return VerificationReport(entries=list(entries), metadata=metadata)


def _merge_value(a: Any, b: Any) -> Any:
    if a == b:
        return a
    values = (a if isinstance(a, list) else [a]) + (b if isinstance(b, list) else [b])
    unique = []
    for v in values:
        if v not in unique:
            unique.append(v)
    return sorted(unique, key=lambda v: json.dumps(v, sort_keys=True, default=str))


def merge(*reports: VerificationReport) -> VerificationReport:
    """Concatenate entries in (check, field, anchor) order; metadata keys are unioned.

    Conflicting metadata values are kept as a sorted list, so the result does not depend on the
    order of the inputs.
    """
    if len(reports) == 1 and not isinstance(reports[0], VerificationReport):
        reports = tuple(reports[0])
    entries = [e for r in reports for e in r.entries]
    entries.sort(key=lambda e: (e.check, e.field or "", e.anchor, e.model_dump_json()))
    metadata: Dict[str, Any] = {}
    for r in sorted(reports, key=lambda r: json.dumps(r.metadata, sort_keys=True, default=str)):
        for key, value in r.metadata.items():
            metadata[key] = _merge_value(metadata[key], value) if key in metadata else value
    return VerificationReport(entries=entries, metadata=dict(sorted(metadata.items())))


def to_json(report: VerificationReport) -> str:
    return report.model_dump_json(indent=2)


def from_json(text: str) -> VerificationReport:
    return VerificationReport.model_validate_json(text)


def write_report(report: VerificationReport, path: Union[str, Path]) -> None:
    Path(path).write_text(to_json(report) + "\n", encoding="utf-8")
    logger.info(f"Wrote report with {len(report.entries)} entries to {path}")


def _fmt(v: Optional[float]) -> str:
    return "-" if v is None else f"{v:.3e}"


def render_text(report: VerificationReport, console: Optional[Console] = None) -> None:
    """Print the report as a table."""
    console = console or Console()
    table = Table(title=f"Verification report ({report.metadata.get('field', 'mixed fields')})")
    table.add_column("Check", style="cyan")
    table.add_column("Field")
    table.add_column("N", justify="right")
    table.add_column("Max", justify="right")
    table.add_column("Mean", justify="right")
    table.add_column("Tol", justify="right")
    table.add_column("Order", justify="right")
    table.add_column("Result")
    for e in report.entries:
        if not e.judged:
            verdict = "[yellow]UNJUDGED[/yellow]"
        else:
            verdict = "[green]PASS[/green]" if e.passed else "[red]FAIL[/red]"
        order = "-" if e.convergence_order is None else f"{e.convergence_order:.2f}"
        table.add_row(e.check, e.field or "-", str(e.n_samples), _fmt(e.max_residual),
                      _fmt(e.mean_residual), _fmt(e.tolerance), order, verdict)
    console.print(table)
    failed = len(report.failures())
    summary = "[green]all judged checks passed[/green]" if failed == 0 else f"[red]{failed} check(s) failed[/red]"
    console.print(summary)
