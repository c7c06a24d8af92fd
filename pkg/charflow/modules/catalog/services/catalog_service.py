"""Registry of built-in fields with closed-form ground truth and verification presets."""

import logging
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from charflow.core.exceptions import CharflowError, InvalidInputError, UnknownEntryError
from charflow.modules.exprlang.services.field_file import load_field_file
from charflow.modules.exprlang.services.parser import parse
from charflow.modules.catalog.services.example_fields import quartic_H, quartic_theta
from charflow.modules.fields.services.frame_service import BuiltinField, FrameField
from charflow.modules.fields.services.types import Box, CurveKind, Point
from charflow.modules.flux.services.polygon import PolygonDomain, rectangle_polygon, sector_polygon

logger = logging.getLogger(__name__)

Closed = Callable[[np.ndarray, np.ndarray], np.ndarray]
Tangent = Callable[[np.ndarray, np.ndarray], Tuple[np.ndarray, np.ndarray]]

# Alternative spellings accepted inside bilinear(...)
G_ALIASES = {"y|y|": "y*abs(y)"}


@dataclass(frozen=True)
class ChartPreset:
    anchor: Point
    radius: float
    grid: int
    # closed forms of s, t, f, g in original coordinates, where known
    s: Optional[Closed] = None
    t: Optional[Closed] = None
    f: Optional[Closed] = None
    g: Optional[Closed] = None


@dataclass(frozen=True)
class FunnelPreset:
    center: Point
    kind: CurveKind
    deltas: Tuple[float, ...]
    r_values: Tuple[float, ...]
    # separation bound as a function of (delta, r); None when a limit is expected instead
    bound: Optional[Callable[[float, float], float]] = None
    limit: Optional[float] = None
    rel_tol: float = 0.05


@dataclass(frozen=True)
class VariationalPreset:
    """Pinned endpoints (x0, y0), (x1, y1) of a characteristic that is a graph with y > 0 over [x0, x1]."""

    x0: float
    x1: float
    y0: float
    y1: float
    nodes: int = 400
    # arclength of the comparison trace from (x0, y0); must reach past x1
    trace_length: float = 1.0


@dataclass(frozen=True)
class CatalogEntry:
    """A field with its ground truth and the settings the verification suites use on it."""

    name: str
    description: str
    validity: str
    frame: FrameField
    H: Closed
    characteristic_family: str
    seed_family: str
    in_domain: Callable[[float, float], bool]
    characteristic_tangent: Optional[Tangent] = None
    seed_tangent: Optional[Tangent] = None
    # closed-form endpoint of the characteristic from p after signed arclength L
    characteristic_endpoint: Optional[Callable[[Point, float], Point]] = None
    smooth: bool = True
    sample_starts: Tuple[Point, ...] = ()
    trace_length: float = 0.5
    box: Optional[Box] = None
    chart: Optional[ChartPreset] = None
    flux_polygons: Tuple[Tuple[str, Callable[[], PolygonDomain]], ...] = ()
    funnel: Optional[FunnelPreset] = None
    variational: Optional[VariationalPreset] = None
    notes: Tuple[str, ...] = field(default_factory=tuple)

    @property
    def mode(self) -> str:
        return self.frame.mode.value

    def sample_points(self, n: int, rng: np.random.Generator, box: Box) -> List[Point]:
        """n random points of box inside the validity domain."""
        out: List[Point] = []
        while len(out) < n:
            x = rng.uniform(box.xmin, box.xmax)
            y = rng.uniform(box.ymin, box.ymax)
            if self.in_domain(x, y):
                out.append(Point(float(x), float(y)))
        return out


def _graph(u: str, F1: str, F2: str, name: str) -> FrameField:
    return FrameField.graph(parse(u), parse(F1), parse(F2), name=name)


def _bilinear(g: str) -> CatalogEntry:
    g_expr = G_ALIASES.get(g.replace(" ", ""), g)
    if "x" in parse(g_expr).variables():
        raise InvalidInputError(f"g must be an expression in y only, got {g!r}")
    name = "bilinear" if g_expr == "0" else f"bilinear({g})"
    frame = _graph(f"x*y + ({g_expr})", "-y", "x", name)

    def endpoint(p: Point, length: float) -> Point:
        direction = 1.0 if p.x > 0 else -1.0
        return Point(p.x + direction * length, p.y)

    starts = tuple(Point(0.5 + 0.1 * i, -0.5 + 0.25 * (i % 5)) for i in range(8))
    return CatalogEntry(
        name=name,
        description="u = xy + g(y), F = (-y, x); g shifts D but not the curves",
        validity="x > 0 (or x < 0)",
        frame=frame,
        H=lambda x, y: np.zeros(np.broadcast(x, y).shape),
        characteristic_family="horizontal lines y = c",
        seed_family="vertical lines x = c",
        in_domain=lambda x, y: x > 0,
        characteristic_tangent=lambda x, y: (np.sign(x) * np.ones_like(y), np.zeros_like(y)),
        seed_tangent=lambda x, y: (np.zeros_like(x), np.sign(x) * np.ones_like(y)),
        characteristic_endpoint=endpoint,
        sample_starts=starts,
        trace_length=0.5,
        box=Box.of(0.2, 3.0, -2.0, 2.0),
        chart=ChartPreset(
            anchor=Point(1.0, 0.5),
            radius=0.5,
            grid=21,
            s=lambda x, y: x,
            t=lambda x, y: y,
            f=lambda x, y: np.ones(np.broadcast(x, y).shape),
            g=None if g_expr != "0" else (lambda x, y: 1.0 / (2.0 * x)),
        ),
        flux_polygons=(("square [1,2]x[0,1]", lambda: rectangle_polygon(1.0, 2.0, 0.0, 1.0)),),
        funnel=FunnelPreset(
            center=Point(1.0, 0.5),
            kind=CurveKind.CHARACTERISTIC,
            deltas=(1e-6,),
            r_values=(0.125, 0.25, 0.5),
            bound=lambda delta, r: 10.0 * delta,
        ),
        variational=VariationalPreset(x0=0.5, x1=1.5, y0=0.5, y1=0.5),
    )


def _radial() -> CatalogEntry:
    frame = FrameField.direct(parse("atan2(y, x)"), parse("1/sqrt(x*x + y*y)"), name="radial")

    def endpoint(p: Point, length: float) -> Point:
        r = math.hypot(p.x, p.y)
        angle = math.atan2(p.y, p.x) - length / r
        return Point(r * math.cos(angle), r * math.sin(angle))

    golden = math.pi * (3.0 - math.sqrt(5.0))
    starts = tuple(
        Point(r * math.cos(k * golden), r * math.sin(k * golden))
        for k, r in enumerate(np.linspace(0.5, 2.0, 20))
    )
    return CatalogEntry(
        name="radial",
        description="direct field θ = polar angle, N = (x, y)/r, H = 1/r",
        validity="0.2 <= r <= 5",
        frame=frame,
        H=lambda x, y: 1.0 / np.hypot(x, y),
        characteristic_family="clockwise circles about the origin",
        seed_family="rays from the origin",
        in_domain=lambda x, y: 0.2 <= math.hypot(x, y) <= 5.0,
        characteristic_tangent=lambda x, y: (y / np.hypot(x, y), -x / np.hypot(x, y)),
        seed_tangent=lambda x, y: (x / np.hypot(x, y), y / np.hypot(x, y)),
        characteristic_endpoint=endpoint,
        sample_starts=starts,
        trace_length=0.5,
        box=Box.of(-5.0, 5.0, -5.0, 5.0),
        chart=ChartPreset(
            anchor=Point(1.0, 0.0),
            radius=0.3,
            grid=41,
            s=lambda x, y: 1.0 - y / x,
            f=lambda x, y: np.hypot(x, y) / (x * x),
        ),
        flux_polygons=(
            ("sector r in [1,2], angle in [0,pi/4]", lambda: sector_polygon(1.0, 2.0, 0.0, math.pi / 4, 64)),
        ),
        funnel=FunnelPreset(
            center=Point(1.0, 0.0),
            kind=CurveKind.SEED,
            deltas=(1e-6,),
            r_values=(0.125, 0.25, 0.5),
            bound=lambda delta, r: 2.0 * delta * math.exp(4.0 * r),
        ),
        variational=VariationalPreset(x0=0.5, x1=1.5, y0=math.sqrt(3.75), y1=math.sqrt(1.75), trace_length=1.25),
    )


def _example32() -> CatalogEntry:
    frame = FrameField.direct(
        BuiltinField(quartic_theta, "quartic family theta"),
        BuiltinField(quartic_H, "quartic family H"),
        name="example32",
    )

    def tangent(x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        slope = np.where(y <= 0, 0.0, np.where(y <= x ** 4, 4.0 * y / np.where(x == 0, 1.0, x), 4.0 * x ** 3))
        norm = np.sqrt(1.0 + slope * slope)
        return 1.0 / norm, slope / norm

    return CatalogEntry(
        name="example32",
        description="three-case quartic family: y = x^4 + c above y = x^4, y = c x^4 below it, lines for y <= 0",
        validity="R^2 (H continuous, not Lipschitz near the origin)",
        frame=frame,
        H=lambda x, y: quartic_H(x, y).value,
        characteristic_family="y = x^4 + c (y > x^4), y = c x^4 (0 < y <= x^4), y = c (y <= 0)",
        seed_family="integral curves of N (no closed form)",
        in_domain=lambda x, y: True,
        characteristic_tangent=lambda x, y: tangent(x, y),
        smooth=False,
        sample_starts=(Point(1.0, 1.0), Point(1.0, -1.0), Point(0.5, 1.0), Point(1.0, 0.5)),
        trace_length=0.5,
        chart=ChartPreset(anchor=Point(1.0, -0.5), radius=0.25, grid=21),
        funnel=FunnelPreset(
            center=Point(0.0, 0.0),
            kind=CurveKind.CHARACTERISTIC,
            deltas=(1e-3, 1e-4, 1e-5),
            r_values=(1.0,),
            limit=1.0,
            rel_tol=0.05,
        ),
        notes=("points on the seams y = x^4 and y = 0 belong to the higher-numbered case",),
    )


def _lipschitz_xy() -> CatalogEntry:
    frame = _graph("x*max(y, 0)", "-y", "x", "lipschitz_xy")

    def seed_tangent(x, y):
        r = np.hypot(x, y)
        return np.where(y > 0, 0.0, -y / r), np.where(y > 0, 1.0, x / r)

    def char_tangent(x, y):
        r = np.hypot(x, y)
        return np.where(y > 0, 1.0, x / r), np.where(y > 0, 0.0, y / r)

    return CatalogEntry(
        name="lipschitz_xy",
        description="u = xy for y > 0 and 0 for y <= 0, F = (-y, x)",
        validity="x > 0",
        frame=frame,
        H=lambda x, y: np.zeros(np.broadcast(x, y).shape),
        characteristic_family="horizontal lines for y > 0, rays from the origin for y < 0",
        seed_family="vertical lines for y > 0, circles about the origin for y < 0 (C1, not C2, at y = 0)",
        in_domain=lambda x, y: x > 0,
        characteristic_tangent=char_tangent,
        seed_tangent=seed_tangent,
        sample_starts=(Point(1.0, 0.5), Point(1.5, 0.25), Point(1.0, -0.5), Point(0.8, -0.2)),
        trace_length=0.3,
        box=Box.of(0.1, 3.0, -2.0, 2.0),
        flux_polygons=(("square [0.5,1.5]x[-0.5,0.5]", lambda: rectangle_polygon(0.5, 1.5, -0.5, 0.5)),),
    )


_BUILDERS: Dict[str, Callable[[], CatalogEntry]] = {
    "bilinear": lambda: _bilinear("0"),
    "radial": _radial,
    "example32": _example32,
    "lipschitz_xy": _lipschitz_xy,
}

_BILINEAR_PATTERN = re.compile(r"^bilinear\((?P<g>.+)\)$")


def list_entries() -> List[str]:
    return list(_BUILDERS)


def get(name: str) -> CatalogEntry:
    """Look up a catalog entry; bilinear(<g>) takes any expression in y for g."""
    key = name.strip()
    if key in _BUILDERS:
        return _BUILDERS[key]()
    match = _BILINEAR_PATTERN.match(key)
    if match:
        g = match.group("g")
        try:
            return _bilinear(g)
        except CharflowError as e:
            raise UnknownEntryError(f"bad g in {name!r}: {e.message}") from e
    raise UnknownEntryError(f"unknown catalog entry {name!r}; known: {', '.join(_BUILDERS)}")


def resolve(source: str) -> Tuple[FrameField, Optional[CatalogEntry]]:
    """Frame for a catalog name or a field file path; the catalog entry when there is one."""
    path = Path(source)
    if path.is_file():
        frame = FrameField.from_definition(load_field_file(path))
        logger.info(f"Loaded field {frame.name} from {path}")
        return frame, None
    entry = get(source)
    return entry.frame, entry
