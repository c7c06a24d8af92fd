"""Simple, counterclockwise polygons with outward normals, winding-number tests and ear clipping."""

import json
import math
from functools import cached_property
from pathlib import Path
from typing import List, Sequence, Tuple, Union

import numpy as np

from charflow.core.exceptions import InvalidInputError, OrientationError
from charflow.modules.flux.config import FluxConfig


def signed_area(vertices: np.ndarray) -> float:
    x, y = vertices[:, 0], vertices[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def _cross(ax, ay, bx, by):
    return ax * by - ay * bx


def _edges_intersect(vertices: np.ndarray) -> bool:
    """True when two non-adjacent edges touch or cross."""
    n = len(vertices)
    a = vertices
    b = np.roll(vertices, -1, axis=0)
    lo = np.minimum(a, b)
    hi = np.maximum(a, b)
    for i in range(n):
        j = np.arange(n)
        mask = (j != i) & (j != (i + 1) % n) & (j != (i - 1) % n)
        if not mask.any():
            continue
        c, d = a[mask], b[mask]
        ex, ey = b[i] - a[i]
        o1 = _cross(ex, ey, c[:, 0] - a[i, 0], c[:, 1] - a[i, 1])
        o2 = _cross(ex, ey, d[:, 0] - a[i, 0], d[:, 1] - a[i, 1])
        fx, fy = d[:, 0] - c[:, 0], d[:, 1] - c[:, 1]
        o3 = _cross(fx, fy, a[i, 0] - c[:, 0], a[i, 1] - c[:, 1])
        o4 = _cross(fx, fy, b[i, 0] - c[:, 0], b[i, 1] - c[:, 1])
        boxes = np.all(lo[mask] <= hi[i], axis=1) & np.all(hi[mask] >= lo[i], axis=1)
        if np.any((o1 * o2 <= 0) & (o3 * o4 <= 0) & boxes):
            return True
    return False


class PolygonDomain:
    """A simple polygon traversed counterclockwise; the outward normal is the edge direction rotated by −π/2."""

    def __init__(self, vertices: Sequence[Sequence[float]], order: int = None, refinement: int = None):
        config = FluxConfig.from_env()
        verts = np.asarray(vertices, dtype=float)
        if verts.ndim != 2 or verts.shape[1] != 2 or len(verts) < 3:
            raise InvalidInputError(f"polygon needs at least 3 vertices, got {len(verts)}")
        if not np.all(np.isfinite(verts)):
            raise InvalidInputError("polygon vertices must be finite")
        lengths = np.hypot(*(np.roll(verts, -1, axis=0) - verts).T)
        if np.any(lengths == 0.0):
            raise InvalidInputError("polygon has a zero-length edge")
        area = signed_area(verts)
        span = float(np.max(verts.max(axis=0) - verts.min(axis=0)))
        if abs(area) <= 1e-14 * span * span:
            raise InvalidInputError("polygon is degenerate (zero area)")
        if _edges_intersect(verts):
            raise InvalidInputError("polygon is not simple")
        if area < 0:
            raise OrientationError("polygon is clockwise; vertices must run counterclockwise")
        self.vertices = verts
        self.area = area
        self.order = order or config.ORDER
        self.refinement = refinement or config.REFINEMENT
        self.interior_factor = config.INTERIOR_FACTOR
        self.grazing = config.GRAZING_DISTANCE

    def __len__(self) -> int:
        return len(self.vertices)

    def with_refinement(self, refinement: int) -> "PolygonDomain":
        return PolygonDomain(self.vertices, self.order, refinement)

    @property
    def edges(self) -> Tuple[np.ndarray, np.ndarray]:
        return self.vertices, np.roll(self.vertices, -1, axis=0)

    def outward_normals(self) -> np.ndarray:
        a, b = self.edges
        e = b - a
        length = np.hypot(e[:, 0], e[:, 1])
        return np.column_stack([e[:, 1], -e[:, 0]]) / length[:, None]

    def boundary_distance(self, x, y) -> np.ndarray:
        px = np.atleast_1d(np.asarray(x, dtype=float))
        py = np.atleast_1d(np.asarray(y, dtype=float))
        best = np.full(px.shape, np.inf)
        for a, b in zip(*self.edges):
            ex, ey = b - a
            t = np.clip(((px - a[0]) * ex + (py - a[1]) * ey) / (ex * ex + ey * ey), 0.0, 1.0)
            best = np.minimum(best, np.hypot(a[0] + t * ex - px, a[1] + t * ey - py))
        return best

    def winding_number(self, x, y) -> np.ndarray:
        px = np.atleast_1d(np.asarray(x, dtype=float))
        py = np.atleast_1d(np.asarray(y, dtype=float))
        wn = np.zeros(px.shape, dtype=int)
        for a, b in zip(*self.edges):
            side = _cross(b[0] - a[0], b[1] - a[1], px - a[0], py - a[1])
            up = (a[1] <= py) & (b[1] > py) & (side > 0)
            down = (a[1] > py) & (b[1] <= py) & (side < 0)
            wn += up.astype(int) - down.astype(int)
        return wn

    def contains(self, x, y):
        """Strict interior test; points within the grazing distance of the boundary are outside."""
        inside = (self.winding_number(x, y) != 0) & (self.boundary_distance(x, y) >= self.grazing)
        return bool(inside[0]) if np.ndim(x) == 0 else inside

    @cached_property
    def triangles(self) -> List[np.ndarray]:
        """Ear-clipping triangulation; each triangle is a (3, 2) array, counterclockwise."""
        idx = list(range(len(self.vertices)))
        v = self.vertices
        out: List[np.ndarray] = []
        while len(idx) > 3:
            for k in range(len(idx)):
                i, j, m = idx[k - 1], idx[k], idx[(k + 1) % len(idx)]
                a, b, c = v[i], v[j], v[m]
                if _cross(b[0] - a[0], b[1] - a[1], c[0] - a[0], c[1] - a[1]) <= 0:
                    continue
                others = np.array([q for q in idx if q not in (i, j, m)])
                p = v[others]
                d1 = _cross(b[0] - a[0], b[1] - a[1], p[:, 0] - a[0], p[:, 1] - a[1])
                d2 = _cross(c[0] - b[0], c[1] - b[1], p[:, 0] - b[0], p[:, 1] - b[1])
                d3 = _cross(a[0] - c[0], a[1] - c[1], p[:, 0] - c[0], p[:, 1] - c[1])
                if np.any((d1 >= 0) & (d2 >= 0) & (d3 >= 0)):
                    continue
                out.append(np.array([a, b, c]))
                idx.pop(k)
                break
            else:
                raise InvalidInputError("ear clipping found no ear; polygon is numerically degenerate")
        out.append(v[idx])
        return out

    def split(self, i: int, j: int) -> Tuple["PolygonDomain", "PolygonDomain"]:
        """Cut along the diagonal between vertices i and j (which must lie inside the polygon)."""
        n = len(self.vertices)
        i, j = sorted((i % n, j % n))
        if j - i < 2 or (i == 0 and j == n - 1):
            raise InvalidInputError(f"vertices {i} and {j} are adjacent; no diagonal to cut along")
        mid = 0.5 * (self.vertices[i] + self.vertices[j])
        if not self.contains(mid[0], mid[1]):
            raise InvalidInputError(f"diagonal {i}-{j} leaves the polygon")
        first = self.vertices[i:j + 1]
        second = np.concatenate([self.vertices[j:], self.vertices[:i + 1]])
        return (PolygonDomain(first, self.order, self.refinement),
                PolygonDomain(second, self.order, self.refinement))

    def to_json(self) -> str:
        return json.dumps({"vertices": [[float(x), float(y)] for x, y in self.vertices]})

    @classmethod
    def from_json(cls, text: str, **kwargs) -> "PolygonDomain":
        data = json.loads(text)
        vertices = data["vertices"] if isinstance(data, dict) else data
        return cls(vertices, **kwargs)

    @classmethod
    def load(cls, path: Union[str, Path], **kwargs) -> "PolygonDomain":
        return cls.from_json(Path(path).read_text(encoding="utf-8"), **kwargs)


def rectangle_polygon(xmin: float, xmax: float, ymin: float, ymax: float, **kwargs) -> PolygonDomain:
    return PolygonDomain([(xmin, ymin), (xmax, ymin), (xmax, ymax), (xmin, ymax)], **kwargs)


def sector_polygon(r0: float, r1: float, a0: float, a1: float, n_arc: int = 64, **kwargs) -> PolygonDomain:
    """Annular sector r0 ≤ r ≤ r1, a0 ≤ angle ≤ a1 with arcs replaced by n_arc chords."""
    angles = np.linspace(a0, a1, n_arc + 1)
    outer = np.column_stack([r1 * np.cos(angles), r1 * np.sin(angles)])
    inner = np.column_stack([r0 * np.cos(angles[::-1]), r0 * np.sin(angles[::-1])])
    if r0 == 0:
        inner = np.zeros((1, 2))
    return PolygonDomain(np.concatenate([outer, inner]), **kwargs)


def wedge_polygon(lower: np.ndarray, upper: np.ndarray, **kwargs) -> PolygonDomain:
    """Region between two polylines that start near each other; closed by their end chords.

    Orientation is fixed from the signed area, never assumed.
    """
    ring = np.concatenate([lower, upper[::-1]])
    keep = np.ones(len(ring), dtype=bool)
    step = np.hypot(*(np.roll(ring, -1, axis=0) - ring).T)
    keep &= step > 1e-14 * max(1.0, float(np.max(np.abs(ring))))
    ring = ring[keep]
    if signed_area(ring) < 0:
        ring = ring[::-1]
    return PolygonDomain(ring, **kwargs)


def max_edge_length(triangle: np.ndarray) -> float:
    return max(math.dist(triangle[0], triangle[1]), math.dist(triangle[1], triangle[2]),
               math.dist(triangle[2], triangle[0]))
