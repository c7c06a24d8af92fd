"""Theorem A and funnel verification suites."""

import math
from typing import List, Optional

import numpy as np

from charflow.core.base_module import BaseModule, SuiteContext
from charflow.core.exceptions import CharflowError
from charflow.core.executor import parallel_map
from charflow.modules.catalog.config import CatalogConfig
from charflow.modules.catalog.services.catalog_service import CatalogEntry, get
from charflow.modules.fields.services.types import Box, CurveKind, Point
from charflow.modules.report.services.convergence import estimate_order
from charflow.modules.report.services.report_service import make_entry, new_report
from charflow.modules.tracer.config import TracerConfig
from charflow.modules.tracer.services.curve import distance_to_polyline, hausdorff_distance
from charflow.modules.tracer.services.funnel import funnel
from charflow.modules.tracer.services.picard import picard_characteristic
from charflow.modules.tracer.services.tracer_service import CurveTracer, theorem_a_residual
from charflow.modules.variational.services.variational_service import (
    curve_from_function,
    euler_lagrange_residual,
    minimize_LH,
    sup_distance_to_curve,
)
from charflow.schemas.report import ReportEntry, VerificationReport

DEFAULT_BOX = Box.square(2.0)

# closed-form curvature of y = x^4 + c at x = 1
CASE1_KAPPA = 12.0 * 17.0 ** -1.5


class TheoremASuite(BaseModule):
    """Curvature law κ = −H along characteristics, checked every way the toolkit can compute curves."""

    def __init__(self):
        super().__init__(
            name="theorem-a",
            version="1.0.0",
            description="Characteristics have curvature −H: RK4, Picard and variational routes",
        )
        self.config: Optional[TracerConfig] = None

    async def initialize(self) -> None:
        self.config = TracerConfig.from_env()

    def _starts(self, context: SuiteContext) -> List[Point]:
        if context.config.start is not None:
            return [Point(*context.config.start)]
        if context.entry is not None:
            return list(context.entry.sample_starts)
        return []

    def applies_to(self, context: SuiteContext) -> bool:
        return bool(self._starts(context))

    def run(self, context: SuiteContext) -> VerificationReport:
        config = self.config or TracerConfig.from_env()
        frame, entry = context.frame, context.entry
        tracer = CurveTracer(frame, config)
        starts = self._starts(context)
        length = context.config.arclen if entry is None else entry.trace_length
        box = entry.box if entry is not None else None
        step = context.config.step or config.STEP
        smooth = entry.smooth if entry is not None else True
        entries: List[ReportEntry] = []

        def add(check, anchor, residuals, **kwargs):
            entries.append(make_entry(check, anchor, residuals, context.field_name, context.policy, **kwargs))

        # curvature under step halving
        def worst_residual(h: float) -> float:
            curves = parallel_map(
                lambda p: tracer.trace(p, CurveKind.CHARACTERISTIC, length, h, box), starts)
            return float(max(np.max(theorem_a_residual(c)) for c in curves if len(c) >= 3))

        levels = [4.0 * step, 2.0 * step, step]
        errors = [worst_residual(h) for h in levels]
        order = estimate_order(errors) if smooth else None
        add("theorem_a.curvature", "dθ/dσ = −H along characteristics", errors[-1], order=order,
            note="max over starts; steps " + ", ".join(f"{h:g}" for h in levels))

        # reversibility: forward then backward returns to the start
        def round_trip(p: Point) -> float:
            ahead = tracer.trace(p, CurveKind.CHARACTERISTIC, length, step, box)
            back = tracer.trace(ahead.end, CurveKind.CHARACTERISTIC, -float(ahead.sigma[-1]), step, box)
            return math.dist(back.end, p)

        add("theorem_a.reversibility", "tracing is reversible", parallel_map(round_trip, starts))

        if entry is not None:
            entries.extend(self._closed_form_checks(context, entry, tracer, config))
        entries.extend(self._picard_check(context, tracer, config, starts))
        if entry is not None and entry.variational is not None:
            entries.extend(self._variational_checks(context, entry, tracer))
        self.logger.info(f"Theorem A suite on {context.field_name}: {len(entries)} entries")
        return new_report(context.field_name, {"suite": self.name, "step": step, "starts": len(starts)}, entries)

    def _closed_form_checks(self, context: SuiteContext, entry: CatalogEntry, tracer: CurveTracer,
                            config: TracerConfig) -> List[ReportEntry]:
        name, policy = context.field_name, context.policy
        out: List[ReportEntry] = []
        starts = list(entry.sample_starts)

        if entry.characteristic_endpoint is not None:
            steps = [config.ENDPOINT_STEP, config.ENDPOINT_STEP / 2.0, config.ENDPOINT_STEP / 4.0]
            errors = []
            for h in steps:
                misses = [math.dist(tracer.trace(p, CurveKind.CHARACTERISTIC, entry.trace_length, h).end,
                                    entry.characteristic_endpoint(p, entry.trace_length)) for p in starts]
                errors.append(max(misses))
            out.append(make_entry("theorem_a.rk4_endpoint", "RK4 endpoint against the closed-form curve",
                                  errors[-1], name, policy, order=estimate_order(errors)))

        tangents = [(CurveKind.CHARACTERISTIC, entry.characteristic_tangent), (CurveKind.SEED, entry.seed_tangent)]
        if any(t is not None for _, t in tangents):
            catalog_config = CatalogConfig.from_env()
            rng = np.random.default_rng(context.config.seed or catalog_config.RANDOM_SEED)
            points = entry.sample_points(catalog_config.CONSISTENCY_SAMPLES, rng, entry.box or DEFAULT_BOX)
            diffs = []
            for kind, tangent in tangents:
                if tangent is None:
                    continue
                for p in points:
                    v = context.frame.velocity(p.x, p.y, kind)
                    t = tangent(p.x, p.y)
                    diffs.append(math.hypot(float(v[0]) - float(t[0]), float(v[1]) - float(t[1])))
            out.append(make_entry("theorem_a.catalog_tangency", "frame directions match the closed-form families",
                                  diffs, name, policy))

        if name == "example32":
            curve = tracer.trace_bidirectional(Point(1.0, 1.0), CurveKind.CHARACTERISTIC, 0.05, 0.05)
            kappa = np.gradient(curve.theta, curve.sigma)[curve.info["start_index"]]
            out.append(make_entry("theorem_a.example32_case1_kappa", "κ of y = x⁴ + c at (1, 1)",
                                  abs(kappa - CASE1_KAPPA), name, policy))
            flat = tracer.trace_bidirectional(Point(1.0, -1.0), CurveKind.CHARACTERISTIC, 0.25, 0.25)
            out.append(make_entry("theorem_a.example32_case3_kappa", "κ of the lines y = c",
                                  np.abs(np.gradient(flat.theta, flat.sigma)), name, policy))

        if name == "lipschitz_xy":
            out.append(self._lipschitz_seed(context, tracer))

        if name.startswith("bilinear"):
            other = get("bilinear(y|y|)" if name == "bilinear" else "bilinear").frame
            other_tracer = CurveTracer(other, config)
            gaps = []
            for kind in (CurveKind.CHARACTERISTIC, CurveKind.SEED):
                for p in starts:
                    a = tracer.trace(p, kind, entry.trace_length, box=entry.box)
                    b = other_tracer.trace(p, kind, entry.trace_length, box=entry.box)
                    n = min(len(a), len(b))
                    gaps.append(float(np.max(np.hypot(a.x[:n] - b.x[:n], a.y[:n] - b.y[:n]))))
            out.append(make_entry("theorem_a.curve_invariance_ug", f"curves of {name} and {other.name} coincide",
                                  gaps, name, policy))
        return out

    def _lipschitz_seed(self, context: SuiteContext, tracer: CurveTracer) -> ReportEntry:
        """Seed through (1, 0): vertical segment above the x-axis, unit circle below."""
        curve = tracer.trace_bidirectional(Point(1.0, 0.0), CurveKind.SEED, math.pi / 6.0, 0.5)
        angles = np.linspace(-math.pi / 6.0, 0.0, 2001)
        heights = np.linspace(0.0, 0.5, 2001)[1:]
        reference = np.concatenate([
            np.column_stack([np.cos(angles), np.sin(angles)]),
            np.column_stack([np.ones_like(heights), heights]),
        ])
        return make_entry("theorem_a.lipschitz_seed_geometry", "seed curve through (1, 0) is a segment and an arc",
                          hausdorff_distance(curve.points, reference), context.field_name, context.policy)

    def _picard_check(self, context: SuiteContext, tracer: CurveTracer, config: TracerConfig,
                      starts: List[Point]) -> List[ReportEntry]:
        entry = context.entry
        p0 = entry.chart.anchor if entry is not None and entry.chart is not None else starts[0]
        try:
            picard = picard_characteristic(context.frame, p0, (p0.x, p0.x + config.PICARD_SPAN))
        except CharflowError as e:
            self.logger.warning(f"Picard comparison skipped on {context.field_name}: {e.message}")
            return []
        rk = tracer.trace(p0, CurveKind.CHARACTERISTIC, 1.5 * float(picard.sigma[-1]), config.STEP)
        gap = float(np.max(distance_to_polyline(picard.points, rk.points)))
        return [make_entry("theorem_a.picard_agreement", "Picard iterate of the integral equation matches RK4",
                           gap, context.field_name, context.policy,
                           note=f"{picard.info['iterations']} Picard iterations")]

    def _variational_checks(self, context: SuiteContext, entry: CatalogEntry,
                            tracer: CurveTracer) -> List[ReportEntry]:
        preset = entry.variational
        c0 = curve_from_function(lambda x: preset.y0 + (preset.y1 - preset.y0) * (x - preset.x0)
                                 / (preset.x1 - preset.x0), preset.x0, preset.x1, preset.nodes)
        try:
            minimizer = minimize_LH(c0, context.frame)
        except CharflowError as e:
            self.logger.error(f"L_H minimization failed on {context.field_name}: {e.message}")
            return [make_entry("theorem_a.variational_agreement", "L_H minimizer matches the characteristic",
                               math.inf, context.field_name, context.policy, note=e.code)]
        traced = tracer.trace(Point(preset.x0, preset.y0), CurveKind.CHARACTERISTIC, preset.trace_length)
        return [
            make_entry("theorem_a.variational_agreement", "L_H minimizer matches the characteristic",
                       sup_distance_to_curve(minimizer, traced), context.field_name, context.policy),
            make_entry("variational.euler_lagrange", "(y'/√(1+y'²))' + H = 0 at the minimizer",
                       np.abs(euler_lagrange_residual(minimizer, context.frame)), context.field_name,
                       context.policy),
        ]


class FunnelSuite(BaseModule):
    """Branch separation of curves launched from nearby starts."""

    def __init__(self):
        super().__init__(
            name="funnel",
            version="1.0.0",
            description="Funnel separation: bounded under Lipschitz H, nonunique limit for example32",
            dependencies=["theorem-a"],
        )

    def applies_to(self, context: SuiteContext) -> bool:
        return context.entry is not None and context.entry.funnel is not None

    def run(self, context: SuiteContext) -> VerificationReport:
        entry = context.entry
        preset = entry.funnel
        entries: List[ReportEntry] = []
        notes = []
        ratios = []
        limit_gap = None
        for delta in preset.deltas:
            result = funnel(context.frame, preset.center, preset.kind, preset.r_values, delta=delta,
                            step=context.config.step, box=entry.box)
            for level in result.levels:
                flux = "-" if level.flux is None else f"{level.flux:.6g}"
                notes.append(f"δ={delta:g} r={level.r:g}: sep {level.separation:.6g}, h(r) {flux}")
                if preset.bound is not None:
                    ratios.append(level.separation / preset.bound(delta, level.r))
            if preset.limit is not None:
                last = result.levels[-1].separation
                limit_gap = abs(last - preset.limit) / preset.limit
        if preset.bound is not None:
            entries.append(make_entry("funnel.separation", "separation stays within its bound (ratio ≤ 1)",
                                      ratios, context.field_name, context.policy, note="; ".join(notes)))
        if limit_gap is not None:
            entries.append(make_entry("funnel.nonuniqueness_limit",
                                      f"separation at r = {max(preset.r_values):g} tends to {preset.limit:g}",
                                      limit_gap, context.field_name, context.policy, note="; ".join(notes)))
        self.logger.info(f"Funnel suite on {context.field_name}: {'; '.join(notes)}")
        return new_report(context.field_name, {"suite": self.name, "center": list(preset.center)}, entries)
