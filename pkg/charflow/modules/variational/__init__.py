"""Variational module."""

from charflow.modules.variational.services.variational_service import (
    GraphCurve,
    LHFunctional,
    as_h_function,
    circle_arc,
    curve_from_function,
    euler_lagrange_residual,
    eval_LH,
    graph_curvature,
    minimize_LH,
    sup_distance_to_curve,
    to_curve,
)

__all__ = [
    "GraphCurve",
    "LHFunctional",
    "as_h_function",
    "circle_arc",
    "curve_from_function",
    "euler_lagrange_residual",
    "eval_LH",
    "graph_curvature",
    "minimize_LH",
    "sup_distance_to_curve",
    "to_curve",
]
