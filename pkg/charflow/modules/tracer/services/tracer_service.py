"""Fixed-step RK4 integration of characteristic and seed curves."""

import logging
import math
from typing import Callable, List, Optional, Tuple

import numpy as np
from scipy.optimize import brentq

from charflow.core.exceptions import DomainError, InvalidInputError, StepTooLargeError, SingularPointError, TooShortError
from charflow.modules.fields.services.frame_service import FrameField
from charflow.modules.fields.services.types import Box, CurveKind, Point
from charflow.modules.tracer.config import TracerConfig
from charflow.modules.tracer.services.curve import Curve, ExitEvent

logger = logging.getLogger(__name__)

StopFunction = Callable[[float, float], float]
Integrand = Callable[[float, float], float]


def _rk4(field: FrameField, kind: CurveKind, x: float, y: float, h: float,
         integrand: Optional[Integrand] = None) -> Tuple[float, float, float]:
    """One RK4 step; the integrand, if any, is carried as an extra state component."""
    p1 = (x, y)
    k1 = field.velocity(*p1, kind)
    p2 = (x + 0.5 * h * k1[0], y + 0.5 * h * k1[1])
    k2 = field.velocity(*p2, kind)
    p3 = (x + 0.5 * h * k2[0], y + 0.5 * h * k2[1])
    k3 = field.velocity(*p3, kind)
    p4 = (x + h * k3[0], y + h * k3[1])
    k4 = field.velocity(*p4, kind)
    dq = 0.0
    if integrand is not None:
        dq = h / 6.0 * (integrand(*p1) + 2.0 * integrand(*p2) + 2.0 * integrand(*p3) + integrand(*p4))
    return (
        x + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
        y + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        float(dq),
    )


def sample_curve(field: FrameField, kind: CurveKind, start: Point, sigma, xs, ys,
                 exit_event: ExitEvent = ExitEvent.COMPLETED) -> Curve:
    """Attach unwrapped θ and H to raw positions."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    theta = np.unwrap(np.broadcast_to(field.theta(x, y), x.shape).astype(float))
    H = np.broadcast_to(field.mean_curvature(x, y), x.shape).astype(float)
    return Curve(kind=kind, start=start, sigma=np.asarray(sigma, dtype=float), x=x, y=y,
                 theta=theta, H=H, exit_event=exit_event)


class CurveTracer:
    """Traces integral curves of N⊥ (characteristics) or N (seeds) over one frame field."""

    def __init__(self, field: FrameField, config: Optional[TracerConfig] = None):
        self.field = field
        self.config = config or TracerConfig.from_env()
        self.logger = logging.getLogger(f"{__name__}.CurveTracer")

    def _step(self, kind: CurveKind, x: float, y: float, h: float,
              integrand: Optional[Integrand] = None) -> Tuple[float, float, float]:
        try:
            return _rk4(self.field, kind, x, y, h, integrand)
        except SingularPointError:
            raise
        except DomainError as e:
            raise StepTooLargeError(
                f"RK4 stage left the field's domain near ({x:.6g}, {y:.6g}) with step {h:.3g}: {e.message}",
                {"x": x, "y": y, "step": h},
            ) from e

    def _land(self, kind: CurveKind, x: float, y: float, h: float, event: StopFunction,
              integrand: Optional[Integrand]) -> Tuple[float, float, float, float]:
        """Partial step in [0, h] (or [h, 0]) at which event reaches zero, with the landed state."""

        def g(hh: float) -> float:
            nx, ny, _ = self._step(kind, x, y, hh)
            return event(nx, ny)

        if event(x, y) == 0.0:
            return 0.0, x, y, 0.0
        lo, hi = sorted((0.0, h))
        h_star = brentq(g, lo, hi, xtol=self.config.CROSSING_XTOL)
        nx, ny, dq = self._step(kind, x, y, h_star, integrand)
        return h_star, nx, ny, dq

    def trace(self, p0: Point, kind: CurveKind, length: float, step: Optional[float] = None,
              box: Optional[Box] = None, stop: Optional[StopFunction] = None,
              integrand: Optional[Integrand] = None) -> Curve:
        """Trace from p0 over signed arclength `length` (negative runs against the frame direction).

        The trace ends early on leaving box, on a sign change of stop, or at a singular point; the
        exit event records which. With an integrand, info["integral"] holds its cumulative integral
        in σ at every sample.
        """
        step = self.config.STEP if step is None else step
        if not step > 0:
            raise InvalidInputError(f"step must be positive, got {step}")
        if length == 0 or not math.isfinite(length):
            raise InvalidInputError(f"length must be nonzero and finite, got {length}")
        kind = CurveKind(kind)
        x, y = float(p0[0]), float(p0[1])
        if box is not None and box.margin(x, y) < 0:
            raise InvalidInputError(f"start ({x}, {y}) lies outside the tracing box")
        self.field.normal(x, y)

        direction = 1.0 if length > 0 else -1.0
        total = abs(length)
        n_steps = max(1, math.ceil(total / step - 1e-9))
        stop_sign = None if stop is None else np.sign(stop(x, y))

        sig: List[float] = [0.0]
        xs: List[float] = [x]
        ys: List[float] = [y]
        acc: List[float] = [0.0]
        event = ExitEvent.COMPLETED
        travelled = 0.0
        for i in range(n_steps):
            h = step if i < n_steps - 1 else total - step * (n_steps - 1)
            try:
                nx, ny, dq = self._step(kind, x, y, direction * h, integrand)
            except SingularPointError as e:
                self.logger.warning(f"Trace from {p0} stopped at singular point after σ = {travelled:.6g}: {e.message}")
                event = ExitEvent.SINGULAR
                break

            hit = None
            if box is not None and box.margin(nx, ny) < 0:
                hit = (ExitEvent.BOX_EXIT, box.margin)
            elif stop is not None and (stop(nx, ny) == 0 or np.sign(stop(nx, ny)) != stop_sign):
                hit = (ExitEvent.STOP, stop)
            if hit is not None:
                event, fn = hit
                h_star, nx, ny, dq = self._land(kind, x, y, direction * h, fn, integrand)
                h_star = abs(h_star)
                if h_star == 0.0:
                    break
                if h_star < self.config.MIN_LANDING_FRACTION * step and len(xs) > 1:
                    # the landed point replaces the last sample so σ spacing stays well conditioned
                    xs[-1], ys[-1] = nx, ny
                    acc[-1] += dq
                    sig[-1] = direction * (travelled + h_star)
                else:
                    xs.append(nx)
                    ys.append(ny)
                    acc.append(acc[-1] + dq)
                    sig.append(direction * (travelled + h_star))
                break

            travelled += h
            x, y = nx, ny
            xs.append(x)
            ys.append(y)
            acc.append(acc[-1] + dq)
            sig.append(direction * travelled)

        self.logger.debug(f"Traced {kind.value} from {p0}: {len(xs)} samples, exit {event.value}")
        curve = sample_curve(self.field, kind, Point(float(p0[0]), float(p0[1])), sig, xs, ys, event)
        if integrand is not None:
            curve.info["integral"] = np.array(acc)
        return curve

    def trace_bidirectional(self, p0: Point, kind: CurveKind, back: float, forward: float,
                            step: Optional[float] = None, box: Optional[Box] = None) -> Curve:
        """Trace back then forward so p0 is an interior sample; σ runs from −back to +forward."""
        if back <= 0 or forward <= 0:
            raise InvalidInputError("back and forward lengths must be positive")
        behind = self.trace(p0, kind, -back, step, box)
        ahead = self.trace(p0, kind, forward, step, box)
        events = [e for e in (behind.exit_event, ahead.exit_event) if e is not ExitEvent.COMPLETED]
        curve = Curve(
            kind=ahead.kind,
            start=ahead.start,
            sigma=np.concatenate([behind.sigma[::-1], ahead.sigma[1:]]),
            x=np.concatenate([behind.x[::-1], ahead.x[1:]]),
            y=np.concatenate([behind.y[::-1], ahead.y[1:]]),
            theta=np.unwrap(np.concatenate([behind.theta[::-1], ahead.theta[1:]])),
            H=np.concatenate([behind.H[::-1], ahead.H[1:]]),
            exit_event=events[0] if events else ExitEvent.COMPLETED,
            info={"start_index": len(behind) - 1},
        )
        return curve


def trace(field: FrameField, p0: Point, kind: CurveKind, length: float, step: Optional[float] = None,
          box: Optional[Box] = None, stop: Optional[StopFunction] = None) -> Curve:
    return CurveTracer(field).trace(p0, kind, length, step, box, stop)


def trace_bidirectional(field: FrameField, p0: Point, kind: CurveKind, back: float, forward: float,
                        step: Optional[float] = None, box: Optional[Box] = None) -> Curve:
    return CurveTracer(field).trace_bidirectional(p0, kind, back, forward, step, box)


def curvature_profile(curve: Curve) -> Curve:
    """κ = dθ/dσ by central differences of the unwrapped θ; one-sided at the ends."""
    if len(curve) < 3:
        raise TooShortError(f"curvature needs at least 3 samples, curve has {len(curve)}")
    kappa = np.gradient(curve.theta, curve.sigma)
    return curve.with_kappa(kappa)


def theorem_a_residual(curve: Curve) -> np.ndarray:
    """|κ + H| at interior samples."""
    if curve.kappa is None:
        curve = curvature_profile(curve)
    return np.abs(curve.kappa[1:-1] + curve.H[1:-1])
