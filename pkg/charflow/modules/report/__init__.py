"""Report module."""

from charflow.modules.report.services.convergence import OrderEstimate, convergence_order, estimate_order
from charflow.modules.report.services.report_service import (
    from_json,
    make_entry,
    merge,
    new_report,
    render_text,
    to_json,
    write_report,
)
from charflow.modules.report.tolerances import TolerancePolicy, default_policy

__all__ = [
    "OrderEstimate",
    "TolerancePolicy",
    "convergence_order",
    "default_policy",
    "estimate_order",
    "from_json",
    "make_entry",
    "merge",
    "new_report",
    "render_text",
    "to_json",
    "write_report",
]
