"""Small geometric value types shared across modules."""

import math
from enum import Enum
from typing import NamedTuple

from charflow.core.exceptions import InvalidInputError


class CurveKind(str, Enum):
    """Which frame direction a curve follows."""

    CHARACTERISTIC = "char"  # integral curve of N⊥
    SEED = "seed"  # integral curve of N


class FieldMode(str, Enum):
    GRAPH = "graph"
    DIRECT = "direct"


class Point(NamedTuple):
    x: float
    y: float

    @classmethod
    def of(cls, x: float, y: float) -> "Point":
        if not (math.isfinite(x) and math.isfinite(y)):
            raise InvalidInputError(f"point ({x}, {y}) is not finite")
        return cls(float(x), float(y))

    @classmethod
    def parse(cls, text: str) -> "Point":
        """'x,y' -> Point."""
        try:
            x, y = (float(v) for v in text.split(","))
        except ValueError as e:
            raise InvalidInputError(f"expected 'x,y', got {text!r}") from e
        return cls.of(x, y)

    def norm(self) -> float:
        return math.hypot(self.x, self.y)


class Box(NamedTuple):
    """Axis-aligned rectangle [xmin, xmax] × [ymin, ymax]."""

    xmin: float
    xmax: float
    ymin: float
    ymax: float

    @classmethod
    def of(cls, xmin: float, xmax: float, ymin: float, ymax: float) -> "Box":
        if not (xmin < xmax and ymin < ymax):
            raise InvalidInputError(f"empty box [{xmin}, {xmax}] × [{ymin}, {ymax}]")
        return cls(float(xmin), float(xmax), float(ymin), float(ymax))

    @classmethod
    def square(cls, half_width: float) -> "Box":
        return cls.of(-half_width, half_width, -half_width, half_width)

    def margin(self, x: float, y: float) -> float:
        """Signed distance-like margin: positive strictly inside, zero on the boundary."""
        return min(x - self.xmin, self.xmax - x, y - self.ymin, self.ymax - y)

    def contains(self, x: float, y: float) -> bool:
        return self.margin(x, y) >= 0.0


def rotate(vx: float, vy: float, angle: float) -> tuple:
    """Rotate a vector counterclockwise by angle."""
    c, s = math.cos(angle), math.sin(angle)
    return (c * vx - s * vy, s * vx + c * vy)
