"""Rigid rotations about a base point that straighten the frame there."""

import math

import numpy as np

from charflow.modules.fields.services.frame_service import FrameField
from charflow.modules.fields.services.types import Point


class FrameRotation:
    """Rotation about center by angle; straightening() picks angle = π/2 − θ(center)."""

    def __init__(self, center: Point, angle: float):
        self.center = Point(float(center[0]), float(center[1]))
        self.angle = float(angle)
        self._c = math.cos(self.angle)
        self._s = math.sin(self.angle)

    @classmethod
    def straightening(cls, field: FrameField, p0: Point) -> "FrameRotation":
        return cls(p0, math.pi / 2 - field.frame_at(p0).theta)

    def to_local(self, x, y):
        dx, dy = x - self.center.x, y - self.center.y
        return self.center.x + self._c * dx - self._s * dy, self.center.y + self._s * dx + self._c * dy

    def to_global(self, xi, eta):
        dx, dy = xi - self.center.x, eta - self.center.y
        return self.center.x + self._c * dx + self._s * dy, self.center.y - self._s * dx + self._c * dy

    def vector_to_local(self, vx, vy):
        return self._c * vx - self._s * vy, self._s * vx + self._c * vy

    def local_angle(self, theta):
        """θ + angle wrapped into [−π/2, 3π/2), continuous around π/2."""
        t = np.asarray(theta, dtype=float) + self.angle
        t = np.mod(t + np.pi / 2, 2 * np.pi) - np.pi / 2
        return float(t) if t.ndim == 0 else t
