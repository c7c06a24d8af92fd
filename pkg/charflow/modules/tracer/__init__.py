"""Tracer module."""

from charflow.modules.tracer.services.curve import (
    Curve,
    ExitEvent,
    curve_to_csv,
    hausdorff_distance,
    read_curve_csv,
    write_curve_csv,
)
from charflow.modules.tracer.services.funnel import FunnelLevel, FunnelReport, funnel
from charflow.modules.tracer.services.picard import picard_characteristic
from charflow.modules.tracer.services.tracer_service import (
    CurveTracer,
    curvature_profile,
    theorem_a_residual,
    trace,
    trace_bidirectional,
)

__all__ = [
    "Curve",
    "CurveTracer",
    "ExitEvent",
    "FunnelLevel",
    "FunnelReport",
    "curvature_profile",
    "curve_to_csv",
    "funnel",
    "hausdorff_distance",
    "picard_characteristic",
    "read_curve_csv",
    "theorem_a_residual",
    "trace",
    "trace_bidirectional",
    "write_curve_csv",
]
