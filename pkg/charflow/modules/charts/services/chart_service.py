"""Characteristic coordinates (s, t) and densities (f, g) on a lattice around a point."""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from charflow.core.exceptions import InvalidInputError, SingularPointError, TransversalMissError
from charflow.core.executor import parallel_map
from charflow.modules.charts.config import ChartsConfig
from charflow.modules.fields.services.frame_service import FrameField
from charflow.modules.fields.services.rotation import FrameRotation
from charflow.modules.fields.services.types import CurveKind, Point
from charflow.modules.tracer.services.curve import ExitEvent
from charflow.modules.tracer.services.tracer_service import CurveTracer
from charflow.schemas.chart import ChartModel


@dataclass(eq=False)
class Chart:
    """Lattice values of s, f (and t, g in graph mode); index [i, j] is local offset (ξ_i, η_j)."""

    center: Point
    rotation: FrameRotation
    radius: float
    n: int
    step: float
    X: np.ndarray
    Y: np.ndarray
    s: np.ndarray
    f: np.ndarray
    t: Optional[np.ndarray] = None
    g: Optional[np.ndarray] = None
    field_name: str = ""

    @property
    def spacing(self) -> float:
        return 2.0 * self.radius / (self.n - 1)

    @property
    def has_t(self) -> bool:
        return self.t is not None

    @property
    def mid(self) -> int:
        return (self.n - 1) // 2


class ChartBuilder:
    """Fills a chart by tracing every lattice point to the two transversals through the center."""

    def __init__(self, field: FrameField, rotation: FrameRotation, radius: float,
                 step: Optional[float] = None, config: Optional[ChartsConfig] = None):
        self.field = field
        self.rotation = rotation
        self.radius = radius
        self.config = config or ChartsConfig.from_env()
        self.step = self.config.STEP if step is None else step
        self.tracer = CurveTracer(field)
        self.logger = logging.getLogger(f"{__name__}.ChartBuilder")

    @property
    def center(self) -> Point:
        return self.rotation.center

    def _to_transversal(self, q: Point, kind: CurveKind, step: float) -> Tuple[Point, float]:
        """Foot on the transversal and the integral of the transport coefficient from q to it."""
        a, b = self.rotation.to_local(q.x, q.y)
        axis = 1 if kind is CurveKind.SEED else 0
        offset = (b - self.center.y) if axis == 1 else (a - self.center.x)
        if offset == 0.0:
            return q, 0.0

        def stop(x, y):
            return self.rotation.to_local(x, y)[axis] - (self.center.y if axis == 1 else self.center.x)

        if kind is CurveKind.SEED:
            def integrand(x, y):
                return float(self.field.mean_curvature(x, y))
        else:
            def integrand(x, y):
                return float(self.field.rot_F(x, y) / self.field.D(x, y))

        curve = self.tracer.trace(q, kind, -math.copysign(2.0 * self.radius, offset), step,
                                  stop=stop, integrand=integrand)
        reach = np.hypot(curve.x - self.center.x, curve.y - self.center.y)
        if curve.exit_event is not ExitEvent.STOP or np.max(reach) > 2.0 * self.radius:
            raise TransversalMissError(q.x, q.y)
        return curve.end, float(curve.info["integral"][-1])

    def _local_sin(self, p: Point) -> float:
        return math.sin(self.rotation.local_angle(self.field.theta(p.x, p.y)))

    def s_and_f(self, q: Point, step: Optional[float] = None) -> Tuple[float, float]:
        """s = rotated x of the seed curve's foot; f = f(foot)·exp(−∫H dτ) with f(foot) = 1/sin θ."""
        foot, integral = self._to_transversal(q, CurveKind.SEED, step or self.step)
        s = self.rotation.to_local(foot.x, foot.y)[0]
        return float(s), math.exp(integral) / self._local_sin(foot)

    def t_and_g(self, q: Point, step: Optional[float] = None) -> Tuple[float, float]:
        """t = rotated y of the characteristic's foot; g = g(foot)·exp(−∫rotF/D dσ), g(foot) = 1/(D sin θ)."""
        foot, integral = self._to_transversal(q, CurveKind.CHARACTERISTIC, step or self.step)
        t = self.rotation.to_local(foot.x, foot.y)[1]
        d = float(self.field.D(foot.x, foot.y))
        return float(t), math.exp(integral) / (d * self._local_sin(foot))


def _guard_ok(field: FrameField, rotation: FrameRotation, r: float, config: ChartsConfig) -> bool:
    offsets = np.linspace(-r, r, config.GUARD_SAMPLES)
    A, B = np.meshgrid(rotation.center.x + offsets, rotation.center.y + offsets, indexing="ij")
    X, Y = rotation.to_global(A, B)
    try:
        theta = rotation.local_angle(field.theta(X, Y))
    except SingularPointError:
        return False
    return bool(np.all(np.abs(theta - math.pi / 2) <= config.GUARD_ANGLE))


def build_chart(field: FrameField, p0: Point, r: float, n: Optional[int] = None,
                step: Optional[float] = None) -> Chart:
    """Characteristic chart on the (2r)-square around p0, in the frame rotated so θ(p0) = π/2.

    The radius is halved while |θ − π/2| exceeds the guard angle somewhere on the square.
    Direct-mode fields get s and f only.
    """
    config = ChartsConfig.from_env()
    logger = logging.getLogger(__name__)
    n = config.GRID if n is None else n
    if n < 5 or n % 2 == 0:
        raise InvalidInputError(f"chart grid size must be odd and at least 5, got {n}")
    if not r > 0:
        raise InvalidInputError(f"chart radius must be positive, got {r}")

    p0 = Point(float(p0[0]), float(p0[1]))
    rotation = FrameRotation.straightening(field, p0)
    for _ in range(config.MAX_SHRINKS + 1):
        if _guard_ok(field, rotation, r, config):
            break
        logger.warning(f"Chart at {p0}: frame not transversal enough on radius {r:.6g}; halving")
        r /= 2.0
    else:
        raise InvalidInputError(f"no admissible chart radius around {p0} after {config.MAX_SHRINKS} halvings")

    builder = ChartBuilder(field, rotation, r, step, config)
    offsets = np.linspace(-r, r, n)
    A, B = np.meshgrid(p0.x + offsets, p0.y + offsets, indexing="ij")
    X, Y = rotation.to_global(A, B)
    with_t = field.is_graph

    def fill_row(i: int):
        row = []
        for j in range(n):
            q = Point(float(X[i, j]), float(Y[i, j]))
            s, f = builder.s_and_f(q)
            t, g = builder.t_and_g(q) if with_t else (math.nan, math.nan)
            row.append((s, f, t, g))
        return row

    rows = np.array(parallel_map(fill_row, range(n)))
    logger.info(f"Built {n}x{n} chart of {field.name} at {p0} with radius {r:.6g}")
    return Chart(
        center=p0,
        rotation=rotation,
        radius=r,
        n=n,
        step=builder.step,
        X=X,
        Y=Y,
        s=rows[..., 0],
        f=rows[..., 1],
        t=rows[..., 2] if with_t else None,
        g=rows[..., 3] if with_t else None,
        field_name=field.name,
    )


def _grid(a: Optional[np.ndarray]):
    return None if a is None else [[float(v) for v in row] for row in a]


def chart_to_model(chart: Chart, summary: Optional[dict] = None) -> ChartModel:
    return ChartModel(
        field=chart.field_name,
        center=[chart.center.x, chart.center.y],
        rotation=chart.rotation.angle,
        radius=chart.radius,
        grid_n=chart.n,
        step=chart.step,
        x=_grid(chart.X),
        y=_grid(chart.Y),
        s=_grid(chart.s),
        f=_grid(chart.f),
        t=_grid(chart.t),
        g=_grid(chart.g),
        residual_summary=summary or {},
    )


def chart_from_model(model: ChartModel) -> Chart:
    center = Point(*model.center)

    def arr(grid):
        return None if grid is None else np.array(grid, dtype=float)

    return Chart(
        center=center,
        rotation=FrameRotation(center, model.rotation),
        radius=model.radius,
        n=model.grid_n,
        step=model.step,
        X=arr(model.x),
        Y=arr(model.y),
        s=arr(model.s),
        f=arr(model.f),
        t=arr(model.t),
        g=arr(model.g),
        field_name=model.field,
    )
