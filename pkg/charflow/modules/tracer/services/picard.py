"""Picard iteration of the integral form of the characteristic equation for graph curves."""

import logging
import math
from typing import Optional, Tuple

import numpy as np
from scipy.integrate import cumulative_trapezoid

from charflow.core.exceptions import InvalidInputError, NoConvergenceError, SlopeBlowupError
from charflow.modules.fields.services.frame_service import FrameField
from charflow.modules.fields.services.rotation import FrameRotation
from charflow.modules.fields.services.types import CurveKind, Point
from charflow.modules.tracer.config import TracerConfig
from charflow.modules.tracer.services.curve import Curve

logger = logging.getLogger(__name__)


def picard_characteristic(field: FrameField, p0: Point, xspan: Tuple[float, float],
                          n: Optional[int] = None, iters: Optional[int] = None,
                          tol: Optional[float] = None) -> Curve:
    """Characteristic through p0 as a graph y(x) in the straightened frame.

    Iterates y'/sqrt(1 + y'^2) = -∫ H(x, y(x)) dx from y ≡ y0. The sup-norm change between
    iterates must drop below tol within iters rounds.
    """
    config = TracerConfig.from_env()
    n = config.PICARD_GRID if n is None else n
    iters = config.PICARD_MAX_ITERS if iters is None else iters
    tol = config.PICARD_TOL if tol is None else tol

    a, b = float(xspan[0]), float(xspan[1])
    if n < 2 or not b > a:
        raise InvalidInputError(f"need xspan[1] > xspan[0] and n >= 2, got {xspan} and {n}")
    if abs(a - p0[0]) > 1e-12 * max(1.0, abs(a)):
        raise InvalidInputError(f"xspan must start at the rotated x of p0 ({p0[0]}), got {a}")

    rotation = FrameRotation.straightening(field, p0)
    xs = np.linspace(a, b, n)
    y = np.full(n, float(p0[1]))
    change = math.inf
    for k in range(1, iters + 1):
        gx, gy = rotation.to_global(xs, y)
        H = np.broadcast_to(field.mean_curvature(gx, gy), xs.shape)
        w = -cumulative_trapezoid(H, xs, initial=0.0)
        if np.any(np.abs(w) >= 1.0):
            where = float(xs[int(np.argmax(np.abs(w) >= 1.0))])
            raise SlopeBlowupError(
                f"|∫H| reached 1 at rotated x = {where:.6g}; shorten xspan",
                {"x": where, "iteration": k},
            )
        slope = w / np.sqrt(1.0 - w * w)
        y_new = float(p0[1]) + cumulative_trapezoid(slope, xs, initial=0.0)
        change = float(np.max(np.abs(y_new - y)))
        y = y_new
        if change < tol:
            logger.debug(f"Picard converged after {k} iterations (change {change:.3g})")
            break
    else:
        raise NoConvergenceError(f"Picard iteration did not converge in {iters} iterations", change)

    gx, gy = rotation.to_global(xs, y)
    sigma = np.concatenate([[0.0], np.cumsum(np.hypot(np.diff(gx), np.diff(gy)))])
    theta = np.unwrap(np.broadcast_to(field.theta(gx, gy), gx.shape).astype(float))
    return Curve(
        kind=CurveKind.CHARACTERISTIC,
        start=Point(float(p0[0]), float(p0[1])),
        sigma=sigma,
        x=gx,
        y=gy,
        theta=theta,
        H=np.broadcast_to(field.mean_curvature(gx, gy), gx.shape).astype(float),
        info={"iterations": k, "last_change": change},
    )
