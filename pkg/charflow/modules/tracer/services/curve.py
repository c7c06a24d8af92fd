"""Arclength-parametrized polylines with per-sample frame data, and their CSV form."""

import csv
import io
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np

from charflow.modules.fields.services.types import CurveKind, Point

CSV_HEADER = ("sigma", "x", "y", "theta", "H", "kappa")


class ExitEvent(str, Enum):
    COMPLETED = "completed"
    BOX_EXIT = "box_exit"
    SINGULAR = "singular"
    STOP = "stop"


@dataclass(frozen=True, eq=False)
class Curve:
    """Samples ordered by σ (signed arclength from the start); θ is unwrapped."""

    kind: CurveKind
    start: Point
    sigma: np.ndarray
    x: np.ndarray
    y: np.ndarray
    theta: np.ndarray
    H: np.ndarray
    kappa: Optional[np.ndarray] = None
    exit_event: ExitEvent = ExitEvent.COMPLETED
    info: Dict[str, Any] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.sigma)

    @property
    def points(self) -> np.ndarray:
        return np.column_stack([self.x, self.y])

    @property
    def end(self) -> Point:
        return Point(float(self.x[-1]), float(self.y[-1]))

    def with_kappa(self, kappa: np.ndarray) -> "Curve":
        return replace(self, kappa=np.asarray(kappa, dtype=float))


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def curve_to_csv(curve: Curve) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for i in range(len(curve)):
        kappa = "" if curve.kappa is None else _fmt(curve.kappa[i])
        writer.writerow([
            _fmt(curve.sigma[i]),
            _fmt(curve.x[i]),
            _fmt(curve.y[i]),
            _fmt(curve.theta[i]),
            _fmt(curve.H[i]),
            kappa,
        ])
    return buf.getvalue()


def write_curve_csv(curve: Curve, path: Union[str, Path]) -> None:
    Path(path).write_text(curve_to_csv(curve), encoding="utf-8")


def read_curve_csv(path: Union[str, Path], kind: CurveKind = CurveKind.CHARACTERISTIC) -> Curve:
    with open(path, newline="", encoding="utf-8") as f:
        rows = list(csv.DictReader(f))
    cols = {name: np.array([float(r[name]) for r in rows]) for name in CSV_HEADER[:-1]}
    kappa = None
    if rows and all(r["kappa"] != "" for r in rows):
        kappa = np.array([float(r["kappa"]) for r in rows])
    return Curve(
        kind=kind,
        start=Point(float(cols["x"][0]), float(cols["y"][0])),
        sigma=cols["sigma"],
        x=cols["x"],
        y=cols["y"],
        theta=cols["theta"],
        H=cols["H"],
        kappa=kappa,
    )


def distance_to_polyline(points: np.ndarray, polyline: np.ndarray) -> np.ndarray:
    """Distance from each point to the nearest segment of polyline."""
    a = polyline[:-1]
    b = polyline[1:]
    ab = b - a
    ab2 = np.maximum(np.einsum("ij,ij->i", ab, ab), 1e-300)
    out = np.empty(len(points))
    for k, p in enumerate(points):
        t = np.clip(np.einsum("ij,ij->i", p - a, ab) / ab2, 0.0, 1.0)
        proj = a + t[:, None] * ab
        out[k] = np.min(np.hypot(proj[:, 0] - p[0], proj[:, 1] - p[1]))
    return out


def hausdorff_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Symmetric Hausdorff distance between two polylines (vertices against segments)."""
    return float(max(np.max(distance_to_polyline(a, b)), np.max(distance_to_polyline(b, a))))
