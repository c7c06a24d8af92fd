"""Legendrian frame (θ, N, N⊥, D, H, rot F) of a graph or direct field."""

import logging
from dataclasses import dataclass
from typing import Callable, List, Optional, Protocol, Tuple

import numpy as np

from charflow.core.exceptions import InvalidInputError, ModeError, SingularPointError
from charflow.modules.exprlang.services.dual import Dual2, Scalar
from charflow.modules.exprlang.services.field_file import FieldDefinition
from charflow.modules.fields.config import FieldsConfig
from charflow.modules.fields.services.types import Box, CurveKind, FieldMode, Point


class FieldSource(Protocol):
    """Anything evaluable to a dual number at (x, y): parsed expressions or built-ins."""

    def eval_dual(self, x: Scalar, y: Scalar) -> Dual2: ...


class BuiltinField:
    """Wraps a Python callable (x, y) -> Dual2 as a field source."""

    def __init__(self, fn: Callable[[Scalar, Scalar], Dual2], label: str):
        self._fn = fn
        self.label = label

    def eval_dual(self, x: Scalar, y: Scalar) -> Dual2:
        return self._fn(x, y)

    def to_source(self) -> str:
        return f"<builtin {self.label}>"


@dataclass(frozen=True)
class FrameSample:
    theta: float
    N: Tuple[float, float]
    Nperp: Tuple[float, float]
    D: Optional[float]
    H: float
    rotF: Optional[float]


@dataclass(frozen=True)
class FrameArrays:
    """Vectorized frame quantities on a batch of points."""

    N1: np.ndarray
    N2: np.ndarray
    D: Optional[np.ndarray]
    H: np.ndarray
    rotF: Optional[np.ndarray]


def _normalize_angle(t: Scalar) -> Scalar:
    t = np.arctan2(np.sin(t), np.cos(t))
    t = np.where(t == -np.pi, np.pi, t)
    return float(t) if np.ndim(t) == 0 else t


class FrameField:
    """Immutable frame field; every query is reentrant."""

    def __init__(
        self,
        mode: FieldMode,
        *,
        u: Optional[FieldSource] = None,
        F1: Optional[FieldSource] = None,
        F2: Optional[FieldSource] = None,
        theta: Optional[FieldSource] = None,
        H: Optional[FieldSource] = None,
        singular_threshold: Optional[float] = None,
        fd_step: Optional[float] = None,
        name: str = "custom",
    ):
        config = FieldsConfig.from_env()
        try:
            self.mode = FieldMode(mode)
        except ValueError:
            raise InvalidInputError(f"unknown field mode {mode!r}", {"mode": str(mode)}) from None
        self.u, self.F1, self.F2 = u, F1, F2
        self.theta_source, self.H_source = theta, H
        self.singular_threshold = singular_threshold if singular_threshold is not None else config.SINGULAR_THRESHOLD
        self.fd_step = fd_step if fd_step is not None else config.FD_STEP
        self.name = name
        self.logger = logging.getLogger(f"{__name__}.FrameField")

        if self.mode is FieldMode.GRAPH and (u is None or F1 is None or F2 is None):
            raise InvalidInputError("graph mode needs u, F1 and F2")
        if self.mode is FieldMode.DIRECT and theta is None:
            raise InvalidInputError("direct mode needs theta")

    @classmethod
    def graph(cls, u: FieldSource, F1: FieldSource, F2: FieldSource, **kwargs) -> "FrameField":
        return cls(FieldMode.GRAPH, u=u, F1=F1, F2=F2, **kwargs)

    @classmethod
    def direct(cls, theta: FieldSource, H: Optional[FieldSource] = None, **kwargs) -> "FrameField":
        return cls(FieldMode.DIRECT, theta=theta, H=H, **kwargs)

    @classmethod
    def from_definition(cls, defn: FieldDefinition, **kwargs) -> "FrameField":
        kwargs.setdefault("name", defn.source or "field-file")
        if defn.mode == FieldMode.GRAPH.value:
            return cls.graph(defn.exprs["u"], defn.exprs["F1"], defn.exprs["F2"], **kwargs)
        return cls.direct(defn.exprs["theta"], defn.get("H"), **kwargs)

    @classmethod
    def direct_from(cls, frame: "FrameField") -> "FrameField":
        """Direct-mode field carrying another frame's θ; H is re-derived by differencing."""

        def theta_of(x, y):
            return Dual2(frame.theta(x, y), 0.0, 0.0)

        return cls.direct(
            BuiltinField(theta_of, f"theta of {frame.name}"),
            fd_step=frame.fd_step,
            name=f"direct({frame.name})",
        )

    @property
    def is_graph(self) -> bool:
        return self.mode is FieldMode.GRAPH

    def require_graph(self, what: str) -> None:
        if not self.is_graph:
            raise ModeError(f"{what} needs a graph-mode field (u, F); {self.name} is direct")

    # Core evaluations; x and y may be floats or arrays

    def _graph_vector(self, x: Scalar, y: Scalar) -> Tuple[Scalar, Scalar]:
        du = self.u.eval_dual(x, y)
        return du.dx + self.F1.eval_dual(x, y).value, du.dy + self.F2.eval_dual(x, y).value

    def normal(self, x: Scalar, y: Scalar) -> Tuple[Scalar, Scalar, Optional[Scalar]]:
        """(N1, N2, D); D is None in direct mode. Raises SingularPointError when D < ε_D."""
        if self.is_graph:
            v1, v2 = self._graph_vector(x, y)
            d = np.hypot(v1, v2)
            if np.any(d < self.singular_threshold):
                self._raise_singular(x, y, d)
            return v1 / d, v2 / d, d
        t = self.theta_source.eval_dual(x, y).value
        return np.cos(t), np.sin(t), None

    def _raise_singular(self, x: Scalar, y: Scalar, d: Scalar) -> None:
        xs, ys, ds = (np.ravel(a) for a in np.broadcast_arrays(x, y, d))
        idx = int(np.argmax(ds < self.singular_threshold))
        raise SingularPointError(float(xs[idx]), float(ys[idx]), float(ds[idx]))

    def D(self, x: Scalar, y: Scalar) -> Scalar:
        self.require_graph("D")
        return self.normal(x, y)[2]

    def theta(self, x: Scalar, y: Scalar) -> Scalar:
        """θ in (−π, π] with N = (cos θ, sin θ)."""
        n1, n2, _ = self.normal(x, y)
        return _normalize_angle(np.arctan2(n2, n1))

    def _step(self, x: Scalar, y: Scalar) -> Scalar:
        return self.fd_step * np.maximum(1.0, np.hypot(x, y))

    def mean_curvature(self, x: Scalar, y: Scalar) -> Scalar:
        """H: the supplied expression if any, else div N by central differences."""
        if self.H_source is not None:
            return self.H_source.eval_dual(x, y).value
        h = self._step(x, y)
        n1_plus = self.normal(x + h, y)[0]
        n1_minus = self.normal(x - h, y)[0]
        n2_plus = self.normal(x, y + h)[1]
        n2_minus = self.normal(x, y - h)[1]
        return (n1_plus - n1_minus + n2_plus - n2_minus) / (2.0 * h)

    def rot_F(self, x: Scalar, y: Scalar) -> Scalar:
        """(F2)_x − (F1)_y by dual numbers."""
        self.require_graph("rot F")
        return self.F2.eval_dual(x, y).dx - self.F1.eval_dual(x, y).dy

    def derivative_along(self, fn: Callable[[Scalar, Scalar], Scalar], x: Scalar, y: Scalar,
                         vx: Scalar, vy: Scalar) -> Scalar:
        """Central difference of fn in the unit direction (vx, vy)."""
        h = self._step(x, y)
        return (fn(x + h * vx, y + h * vy) - fn(x - h * vx, y - h * vy)) / (2.0 * h)

    def velocity(self, x: float, y: float, kind: CurveKind) -> Tuple[float, float]:
        """Unit tangent of the curve family: N⊥ for characteristics, N for seeds."""
        n1, n2, _ = self.normal(x, y)
        if kind is CurveKind.CHARACTERISTIC:
            return n2, -n1
        return n1, n2

    def frame_at(self, p: Point) -> FrameSample:
        x, y = float(p[0]), float(p[1])
        n1, n2, d = self.normal(x, y)
        theta = _normalize_angle(np.arctan2(n2, n1))
        return FrameSample(
            theta=float(theta),
            N=(float(n1), float(n2)),
            Nperp=(float(n2), -float(n1)),
            D=None if d is None else float(d),
            H=float(self.mean_curvature(x, y)),
            rotF=float(self.rot_F(x, y)) if self.is_graph else None,
        )

    def evaluate_arrays(self, X: np.ndarray, Y: np.ndarray) -> FrameArrays:
        X = np.asarray(X, dtype=float)
        Y = np.asarray(Y, dtype=float)
        n1, n2, d = self.normal(X, Y)
        H = np.broadcast_to(self.mean_curvature(X, Y), X.shape)
        rot = np.broadcast_to(self.rot_F(X, Y), X.shape) if self.is_graph else None
        return FrameArrays(
            N1=np.broadcast_to(n1, X.shape),
            N2=np.broadcast_to(n2, X.shape),
            D=None if d is None else np.broadcast_to(d, X.shape),
            H=H,
            rotF=rot,
        )

    def scan_singular(self, box: Box, n: int) -> List[Point]:
        """Lattice points of box (n per side) with D < ε_D; sampling only, certifies nothing."""
        self.require_graph("scan_singular")
        if n < 2:
            raise InvalidInputError(f"a singular scan needs at least 2 points per side, got {n}", {"n": n})
        xs = [box.xmin + (box.xmax - box.xmin) * i / (n - 1) for i in range(n)]
        ys = [box.ymin + (box.ymax - box.ymin) * j / (n - 1) for j in range(n)]
        X, Y = np.meshgrid(np.array(xs), np.array(ys), indexing="ij")
        v1, v2 = self._graph_vector(X, Y)
        d = np.broadcast_to(np.hypot(v1, v2), X.shape)
        hits = np.argwhere(d < self.singular_threshold)
        found = [Point(xs[i], ys[j]) for i, j in hits]
        self.logger.info(f"Singular scan of {self.name}: {len(found)} of {n * n} lattice points")
        return found
