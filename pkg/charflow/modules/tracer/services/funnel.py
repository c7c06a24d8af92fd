"""Uniqueness funnels: nearby branches through a point, their spread and the flux between them."""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from charflow.core.exceptions import InvalidInputError
from charflow.core.executor import parallel_map
from charflow.modules.fields.services.frame_service import FrameField
from charflow.modules.fields.services.types import Box, CurveKind, Point
from charflow.modules.flux.services.flux_service import FluxService
from charflow.modules.flux.services.polygon import wedge_polygon
from charflow.modules.tracer.config import TracerConfig
from charflow.modules.tracer.services.curve import Curve, ExitEvent
from charflow.modules.tracer.services.tracer_service import CurveTracer

logger = logging.getLogger(__name__)


@dataclass
class FunnelLevel:
    r: float
    separation: float
    crossings: List[Point]
    flux: Optional[float] = None


@dataclass
class FunnelReport:
    center: Point
    kind: CurveKind
    delta: float
    n_branches: int
    levels: List[FunnelLevel] = field(default_factory=list)
    branches: List[Curve] = field(default_factory=list)

    def separations(self) -> List[float]:
        return [level.separation for level in self.levels]


def _crossing_index(progress: np.ndarray, r: float) -> int:
    """First sample index i with progress[i] <= r <= progress[i + 1]."""
    hits = np.nonzero((progress[:-1] <= r) & (progress[1:] >= r))[0]
    return int(hits[0]) if len(hits) else -1


def funnel(field: FrameField, p: Point, kind: CurveKind, r_values: Sequence[float],
           n_branches: Optional[int] = None, delta: float = 1e-6, step: Optional[float] = None,
           box: Optional[Box] = None, with_flux: bool = True) -> FunnelReport:
    """Launch branches from p ± δ across the curve direction and follow them out to distance r.

    Distance is measured along the initial direction T0 at p, so branches are compared where they
    cross the line through p + r·T0 perpendicular to T0.
    """
    config = TracerConfig.from_env()
    n_branches = config.FUNNEL_BRANCHES if n_branches is None else n_branches
    step = config.STEP if step is None else step
    kind = CurveKind(kind)
    if n_branches < 2:
        raise InvalidInputError("a funnel needs at least 2 branches")
    if not r_values or min(r_values) <= 0:
        raise InvalidInputError("r values must be positive")
    if not 0 < delta < min(r_values):
        raise InvalidInputError(f"delta must be positive and small against r, got {delta}")

    center = Point(float(p[0]), float(p[1]))
    sample = field.frame_at(center)
    t0 = sample.Nperp if kind is CurveKind.CHARACTERISTIC else sample.N
    across = sample.N if kind is CurveKind.CHARACTERISTIC else sample.Nperp
    r_max = max(r_values)
    offsets = delta * np.linspace(-1.0, 1.0, n_branches)
    starts = [Point(center.x + o * across[0], center.y + o * across[1]) for o in offsets]

    def progress_of(x, y):
        return (x - center.x) * t0[0] + (y - center.y) * t0[1]

    tracer = CurveTracer(field, config)

    def run(start: Point) -> Curve:
        return tracer.trace(start, kind, 3.0 * r_max + 1.0, step, box,
                            stop=lambda x, y: progress_of(x, y) - r_max)

    branches = parallel_map(run, starts)
    report = FunnelReport(center=center, kind=kind, delta=delta, n_branches=n_branches, branches=branches)
    for idx, b in enumerate(branches):
        if b.exit_event is not ExitEvent.STOP:
            raise InvalidInputError(
                f"branch {idx} ended with {b.exit_event.value} before reaching r = {r_max}",
                {"branch": idx, "end": list(b.end)},
            )

    flux_service = FluxService(field)
    for r in sorted(r_values):
        crossings = []
        cut_points = []
        for b in branches:
            prog = progress_of(b.x, b.y)
            i = _crossing_index(prog, r)
            if i < 0:
                raise InvalidInputError(f"branch from {b.start} never reaches r = {r}")
            span = prog[i + 1] - prog[i]
            lam = 0.0 if span == 0 else (r - prog[i]) / span
            q = Point(float(b.x[i] + lam * (b.x[i + 1] - b.x[i])), float(b.y[i] + lam * (b.y[i + 1] - b.y[i])))
            crossings.append(q)
            cut_points.append((i, q))
        pts = np.array(crossings)
        diff = pts[:, None, :] - pts[None, :, :]
        separation = float(np.max(np.hypot(diff[..., 0], diff[..., 1])))
        level = FunnelLevel(r=r, separation=separation, crossings=crossings)
        if with_flux:
            level.flux = _wedge_flux(field, flux_service, kind, branches, cut_points)
        report.levels.append(level)
        logger.debug(f"Funnel at {center}, r={r}: separation {separation:.6g}, flux {level.flux}")
    return report


def _wedge_flux(field: FrameField, flux_service: FluxService, kind: CurveKind,
                branches: List[Curve], cut_points) -> Optional[float]:
    """Boundary flux over the region between the two extremal branches up to their crossings."""
    if kind is CurveKind.CHARACTERISTIC and not field.is_graph:
        return None
    (i_lo, q_lo), (i_hi, q_hi) = cut_points[0], cut_points[-1]
    lower = np.vstack([branches[0].points[: i_lo + 1], [q_lo]])
    upper = np.vstack([branches[-1].points[: i_hi + 1], [q_hi]])
    try:
        domain = wedge_polygon(lower, upper)
    except InvalidInputError as e:
        logger.warning(f"Funnel wedge is not a usable polygon ({e.message}); flux skipped")
        return None

    if kind is CurveKind.SEED:
        def integrand(X, Y, n1, n2):
            fa = field.evaluate_arrays(X, Y)
            return fa.N1 * n1 + fa.N2 * n2
    else:
        def integrand(X, Y, n1, n2):
            fa = field.evaluate_arrays(X, Y)
            return fa.D * (fa.N2 * n1 - fa.N1 * n2)

    value = flux_service.boundary_flux(domain, integrand)
    return value if math.isfinite(value) else None
