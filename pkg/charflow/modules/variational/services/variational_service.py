"""Discrete L_H = |Γ| − ∫_Ω H over graph curves with pinned endpoints, and its minimizer."""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np
from scipy.linalg import LinAlgError, solve_banded

from charflow.core.exceptions import (
    InvalidInputError,
    LeftFeasibleSetError,
    NegativeHeightError,
    NoConvergenceError,
    TooShortError,
)
from charflow.modules.exprlang.services.nodes import Expr
from charflow.modules.fields.services.frame_service import FrameField
from charflow.modules.fields.services.types import CurveKind, Point
from charflow.modules.tracer.services.curve import Curve, distance_to_polyline
from charflow.modules.variational.config import VariationalConfig

logger = logging.getLogger(__name__)

HFunction = Callable[[np.ndarray, np.ndarray], np.ndarray]
HSource = Union[FrameField, Expr, HFunction, float, int]


@dataclass(frozen=True, eq=False)
class GraphCurve:
    """Heights y_0..y_n over a uniform partition of [x0, x1]; y_0 and y_n stay pinned."""

    x0: float
    x1: float
    y: np.ndarray

    def __post_init__(self):
        y = np.asarray(self.y, dtype=float)
        if y.ndim != 1 or len(y) < 2:
            raise InvalidInputError("a graph curve needs at least two heights")
        if not self.x1 > self.x0:
            raise InvalidInputError(f"empty interval [{self.x0}, {self.x1}]")
        if not np.all(np.isfinite(y)):
            raise InvalidInputError("graph curve heights must be finite")
        object.__setattr__(self, "y", y)

    @property
    def n(self) -> int:
        """Number of segments."""
        return len(self.y) - 1

    @property
    def dx(self) -> float:
        return (self.x1 - self.x0) / self.n

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x0, self.x1, self.n + 1)

    def with_interior(self, interior: np.ndarray) -> "GraphCurve":
        y = self.y.copy()
        y[1:-1] = interior
        return GraphCurve(self.x0, self.x1, y)

    def length(self) -> float:
        return float(np.sum(np.hypot(self.dx, np.diff(self.y))))


def as_h_function(H: HSource) -> HFunction:
    """Accept a frame field (its mean curvature), an expression, a constant or a vectorized callable."""
    if isinstance(H, FrameField):
        return lambda x, y: np.broadcast_to(H.mean_curvature(x, y), np.shape(x)).astype(float)
    if isinstance(H, Expr):
        return lambda x, y: np.broadcast_to(H.evaluate(x, y), np.shape(x)).astype(float)
    if isinstance(H, (int, float)):
        value = float(H)
        return lambda x, y: np.full(np.shape(x), value)
    if callable(H):
        return H
    raise InvalidInputError(f"cannot use {type(H).__name__} as a curvature function")


def curve_from_function(fn: Callable[[np.ndarray], np.ndarray], x0: float, x1: float, n: int) -> GraphCurve:
    if n < 1:
        raise InvalidInputError(f"need at least one segment, got {n}")
    x = np.linspace(x0, x1, n + 1)
    return GraphCurve(float(x0), float(x1), np.asarray(fn(x), dtype=float))


def _check_heights(c: GraphCurve) -> None:
    bad = np.nonzero(c.y[1:-1] <= 0)[0]
    if len(bad):
        i = int(bad[0]) + 1
        raise NegativeHeightError(f"height y[{i}] = {c.y[i]:.6g} is not positive", {"index": i})


class LHFunctional:
    """Value, gradient and tridiagonal Hessian of the discrete functional in the interior heights.

    Each vertical strip [x_j, x_{j+1}] is represented by its midpoint column of height
    (y_j + y_{j+1})/2; the column integral of H uses Gauss-Legendre nodes.
    """

    def __init__(self, H: HSource, config: Optional[VariationalConfig] = None):
        self.config = config or VariationalConfig.from_env()
        self.h = as_h_function(H)
        self._nodes, self._weights = np.polynomial.legendre.leggauss(self.config.INNER_ORDER)

    def _midpoints(self, c: GraphCurve):
        return 0.5 * (c.x[:-1] + c.x[1:]), 0.5 * (c.y[:-1] + c.y[1:])

    def area(self, c: GraphCurve) -> float:
        xm, ym = self._midpoints(c)
        # η = ym (1 + ξ) / 2 maps [−1, 1] onto the column [0, ym]
        eta = 0.5 * ym[:, None] * (1.0 + self._nodes[None, :])
        values = self.h(np.broadcast_to(xm[:, None], eta.shape), eta)
        columns = 0.5 * ym * (values @ self._weights)
        return float(c.dx * np.sum(columns))

    def value(self, c: GraphCurve) -> float:
        _check_heights(c)
        return c.length() - self.area(c)

    def _slopes(self, c: GraphCurve):
        delta = np.diff(c.y)
        seg = np.hypot(c.dx, delta)
        return delta, seg

    def gradient(self, c: GraphCurve) -> np.ndarray:
        """∂L/∂y_i for interior i, with the column integral differentiated exactly."""
        delta, seg = self._slopes(c)
        w = delta / seg
        xm, ym = self._midpoints(c)
        hm = self.h(xm, ym)
        return (w[:-1] - w[1:]) - 0.5 * c.dx * (hm[:-1] + hm[1:])

    def hessian_bands(self, c: GraphCurve) -> np.ndarray:
        """Tridiagonal Hessian in solve_banded's (1, 1) layout."""
        delta, seg = self._slopes(c)
        k = c.dx ** 2 / seg ** 3
        xm, ym = self._midpoints(c)
        eps = self.config.H_FD_STEP
        hy = (self.h(xm, ym + eps) - self.h(xm, ym - eps)) / (2.0 * eps)
        a = k - 0.25 * c.dx * hy  # per-segment coupling
        m = c.n - 1
        bands = np.zeros((3, m))
        bands[1] = a[:-1] + a[1:]
        bands[0, 1:] = -k[1:-1] - 0.25 * c.dx * hy[1:-1]
        bands[2, :-1] = bands[0, 1:]
        return bands


def eval_LH(c: GraphCurve, H: HSource) -> float:
    """|Γ| − ∫_{Ω_Γ} H, Ω_Γ being the region between the graph, the x-axis and the two verticals."""
    return LHFunctional(H).value(c)


def minimize_LH(c0: GraphCurve, H: HSource, tol: Optional[float] = None,
                max_iters: Optional[int] = None) -> GraphCurve:
    """Damped Newton on the interior heights; stops once the gradient's max-norm is below tol.

    Trial steps that leave y > 0 or fail the Armijo test are halved; the search gives up after
    MAX_BACKTRACKS halvings.
    """
    config = VariationalConfig.from_env()
    tol = config.TOL if tol is None else tol
    max_iters = config.MAX_ITERS if max_iters is None else max_iters
    functional = LHFunctional(H, config)
    if c0.n < 2:
        return c0

    c = c0
    value = functional.value(c)
    grad = functional.gradient(c)
    for it in range(max_iters + 1):
        gnorm = float(np.max(np.abs(grad)))
        if gnorm < tol:
            logger.info(f"L_H minimized in {it} Newton steps: value {value:.12g}, |grad| {gnorm:.3e}")
            return c
        if it == max_iters:
            break

        try:
            p = solve_banded((1, 1), functional.hessian_bands(c), -grad)
        except (LinAlgError, ValueError):
            p = -grad
        slope = float(grad @ p)
        if not np.all(np.isfinite(p)) or slope >= 0:
            p = -grad
            slope = -float(grad @ grad)

        # changes below rounding level of the summed functional count as no increase
        noise = 64.0 * np.finfo(float).eps * max(1.0, abs(value), c.length())
        alpha = 1.0
        infeasible = False
        for _ in range(config.MAX_BACKTRACKS):
            trial = c.with_interior(c.y[1:-1] + alpha * p)
            infeasible = bool(np.any(trial.y[1:-1] <= 0))
            if not infeasible:
                trial_value = functional.value(trial)
                if trial_value <= value + config.ARMIJO * alpha * slope + noise:
                    break
            alpha *= 0.5
        else:
            if infeasible:
                raise LeftFeasibleSetError(
                    f"every backtracked step left y > 0 at iteration {it}", {"iteration": it})
            # no decrease available at working precision
            raise NoConvergenceError(f"line search stalled at iteration {it} with |grad| {gnorm:.3e}", gnorm)

        c = trial
        value = trial_value
        grad = functional.gradient(c)
        logger.debug(f"Newton step {it}: alpha {alpha:.3g}, L_H {value:.15g}")

    raise NoConvergenceError(f"L_H minimization did not reach |grad| < {tol:g} in {max_iters} steps",
                             float(np.max(np.abs(grad))))


def euler_lagrange_residual(c: GraphCurve, H: HSource) -> np.ndarray:
    """(y'/√(1+y'²))' + H at each interior node, from segment slopes."""
    if c.n < 2:
        raise TooShortError(f"Euler-Lagrange residual needs an interior node, curve has {c.n + 1} nodes")
    h = as_h_function(H)
    delta = np.diff(c.y)
    w = delta / np.hypot(c.dx, delta)
    x, y = c.x[1:-1], c.y[1:-1]
    return (w[1:] - w[:-1]) / c.dx + h(x, y)


def graph_curvature(c: GraphCurve) -> np.ndarray:
    """Signed curvature y''/(1+y'²)^{3/2} at every node; second differences inside, copied at the ends."""
    if c.n < 2:
        raise TooShortError("curvature needs at least three nodes")
    yp = np.gradient(c.y, c.dx, edge_order=2)
    ypp = np.empty_like(c.y)
    ypp[1:-1] = (c.y[2:] - 2.0 * c.y[1:-1] + c.y[:-2]) / c.dx ** 2
    ypp[0], ypp[-1] = ypp[1], ypp[-2]
    return ypp / (1.0 + yp ** 2) ** 1.5


def to_curve(c: GraphCurve, H: Optional[HSource] = None) -> Curve:
    """Curve record of the graph traversed in +x, with N⊥ the unit tangent and κ from second differences."""
    x, y = c.x, c.y
    sigma = np.concatenate([[0.0], np.cumsum(np.hypot(np.diff(x), np.diff(y)))])
    yp = np.gradient(y, c.dx, edge_order=2) if c.n >= 2 else np.full_like(y, (y[-1] - y[0]) / c.dx)
    theta = np.arctan2(1.0, -yp)
    h = np.zeros_like(x) if H is None else as_h_function(H)(x, y)
    kappa = graph_curvature(c) if c.n >= 2 else None
    return Curve(kind=CurveKind.CHARACTERISTIC, start=Point(float(x[0]), float(y[0])), sigma=sigma,
                 x=x, y=y, theta=theta, H=np.asarray(h, dtype=float), kappa=kappa,
                 info={"source": "variational"})


def sup_distance_to_curve(c: GraphCurve, curve: Curve) -> float:
    """Largest distance from a graph node to the polyline of a traced curve."""
    nodes = np.column_stack([c.x, c.y])
    return float(np.max(distance_to_polyline(nodes, curve.points)))


def circle_arc(x0: float, x1: float, y_end: float, curvature: float) -> Callable[[np.ndarray], np.ndarray]:
    """Graph of the arc of signed curvature `curvature` joining (x0, y_end) and (x1, y_end)."""
    radius = 1.0 / abs(curvature)
    half = 0.5 * (x1 - x0)
    if half > radius:
        raise InvalidInputError(f"chord {2 * half:g} exceeds the diameter {2 * radius:g}")
    xc = 0.5 * (x0 + x1)
    sag = math.sqrt(radius ** 2 - half ** 2)
    if curvature < 0:
        yc = y_end - sag
        return lambda x: yc + np.sqrt(radius ** 2 - (np.asarray(x) - xc) ** 2)
    yc = y_end + sag
    return lambda x: yc - np.sqrt(radius ** 2 - (np.asarray(x) - xc) ** 2)
