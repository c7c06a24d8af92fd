"""Forward-mode dual numbers carrying value and both partials in x and y.

Components are floats or numpy arrays of a common shape, so the same code
evaluates one point or a whole grid.
"""

from typing import Union

import numpy as np

from charflow.core.exceptions import DomainError, NonFiniteError

Scalar = Union[float, np.ndarray]


def _unbox(v):
    if isinstance(v, np.ndarray) and v.ndim == 0:
        return float(v)
    return v


class Dual2:
    """value + dx·εx + dy·εy with εx² = εy² = εxεy = 0."""

    __slots__ = ("value", "dx", "dy")

    def __init__(self, value: Scalar, dx: Scalar = 0.0, dy: Scalar = 0.0):
        self.value = value
        self.dx = dx
        self.dy = dy

    @classmethod
    def variable_x(cls, x: Scalar) -> "Dual2":
        return cls(x, np.ones_like(x) if isinstance(x, np.ndarray) else 1.0, _zero_like(x))

    @classmethod
    def variable_y(cls, y: Scalar) -> "Dual2":
        return cls(y, _zero_like(y), np.ones_like(y) if isinstance(y, np.ndarray) else 1.0)

    @property
    def gradient(self) -> tuple:
        return (self.dx, self.dy)

    def is_constant(self) -> bool:
        return bool(np.all(self.dx == 0) and np.all(self.dy == 0))

    def __add__(self, other) -> "Dual2":
        other = lift(other)
        return _checked(Dual2(self.value + other.value, self.dx + other.dx, self.dy + other.dy))

    __radd__ = __add__

    def __sub__(self, other) -> "Dual2":
        other = lift(other)
        return _checked(Dual2(self.value - other.value, self.dx - other.dx, self.dy - other.dy))

    def __rsub__(self, other) -> "Dual2":
        return lift(other) - self

    def __mul__(self, other) -> "Dual2":
        other = lift(other)
        return _checked(Dual2(
            self.value * other.value,
            self.dx * other.value + self.value * other.dx,
            self.dy * other.value + self.value * other.dy,
        ))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Dual2":
        other = lift(other)
        if np.any(other.value == 0):
            raise DomainError("division by zero")
        inv = 1.0 / other.value
        q = self.value * inv
        return _checked(Dual2(q, (self.dx - q * other.dx) * inv, (self.dy - q * other.dy) * inv))

    def __rtruediv__(self, other) -> "Dual2":
        return lift(other) / self

    def __neg__(self) -> "Dual2":
        return Dual2(-self.value, -self.dx, -self.dy)

    def __pow__(self, other) -> "Dual2":
        return power(self, other)

    def __rpow__(self, other) -> "Dual2":
        return power(lift(other), self)

    def __repr__(self) -> str:
        return f"Dual2(value={self.value!r}, dx={self.dx!r}, dy={self.dy!r})"


def _zero_like(v: Scalar) -> Scalar:
    return np.zeros_like(v) if isinstance(v, np.ndarray) else 0.0


def lift(v) -> Dual2:
    """Promote a constant to a dual number with zero gradient."""
    if isinstance(v, Dual2):
        return v
    return Dual2(v, 0.0, 0.0)


def _checked(d: Dual2) -> Dual2:
    if not (np.all(np.isfinite(d.value)) and np.all(np.isfinite(d.dx)) and np.all(np.isfinite(d.dy))):
        raise NonFiniteError("non-finite value or derivative")
    return d


def _chain(a: Dual2, value: Scalar, slope: Scalar) -> Dual2:
    return _checked(Dual2(value, slope * a.dx, slope * a.dy))


def sin(a: Dual2) -> Dual2:
    a = lift(a)
    return _chain(a, np.sin(a.value), np.cos(a.value))


def cos(a: Dual2) -> Dual2:
    a = lift(a)
    return _chain(a, np.cos(a.value), -np.sin(a.value))


def tan(a: Dual2) -> Dual2:
    a = lift(a)
    c = np.cos(a.value)
    if np.any(c == 0):
        raise DomainError("tan at an odd multiple of pi/2")
    return _chain(a, np.tan(a.value), 1.0 / (c * c))


def exp(a: Dual2) -> Dual2:
    a = lift(a)
    with np.errstate(over="ignore"):
        e = np.exp(a.value)
    return _chain(a, e, e)


def log(a: Dual2) -> Dual2:
    a = lift(a)
    if np.any(a.value <= 0):
        raise DomainError("log of a nonpositive value")
    return _chain(a, np.log(a.value), 1.0 / a.value)


def sqrt(a: Dual2) -> Dual2:
    """√a; at a = 0 only points where a has zero gradient are allowed (the slope there is 0)."""
    a = lift(a)
    if np.any(a.value < 0):
        raise DomainError("sqrt of a negative value")
    zero = a.value == 0
    if np.any(zero & ((a.dx != 0) | (a.dy != 0))):
        raise DomainError("sqrt is not differentiable at 0 along a nonzero gradient")
    r = np.sqrt(a.value)
    slope = _unbox(np.where(zero, 0.0, 0.5 / np.where(zero, 1.0, r)))
    return _chain(a, r, slope)


def fabs(a: Dual2) -> Dual2:
    """|a| with the subgradient convention d|a| = 0 at a = 0."""
    a = lift(a)
    return _chain(a, np.abs(a.value), np.sign(a.value))


def atan2(a: Dual2, b: Dual2) -> Dual2:
    """Angle of the point (b, a), as math.atan2(a, b)."""
    a, b = lift(a), lift(b)
    r2 = a.value * a.value + b.value * b.value
    if np.any(r2 == 0):
        raise DomainError("atan2(0, 0) is undefined")
    return _checked(Dual2(
        _unbox(np.arctan2(a.value, b.value)),
        (b.value * a.dx - a.value * b.dx) / r2,
        (b.value * a.dy - a.value * b.dy) / r2,
    ))


def where(mask, a: Dual2, b: Dual2) -> Dual2:
    return Dual2(
        _unbox(np.where(mask, a.value, b.value)),
        _unbox(np.where(mask, a.dx, b.dx)),
        _unbox(np.where(mask, a.dy, b.dy)),
    )


def minimum(a: Dual2, b: Dual2) -> Dual2:
    """min(a, b); ties take the first argument's derivative."""
    a, b = lift(a), lift(b)
    return where(a.value <= b.value, a, b)


def maximum(a: Dual2, b: Dual2) -> Dual2:
    """max(a, b); ties take the first argument's derivative."""
    a, b = lift(a), lift(b)
    return where(a.value >= b.value, a, b)


def _integer_exponent(b: Dual2):
    if not b.is_constant() or np.ndim(b.value) != 0:
        return None
    v = float(b.value)
    return int(v) if v.is_integer() else None


def power(a: Dual2, b: Dual2) -> Dual2:
    """a^b: integer constant exponents by repeated multiplication, otherwise exp(b·log a)."""
    a, b = lift(a), lift(b)
    n = _integer_exponent(b)
    if n is not None:
        result = Dual2(1.0, 0.0, 0.0)
        base = a
        k = abs(n)
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return lift(1.0) / result if n < 0 else result
    if np.any(a.value <= 0):
        raise DomainError("non-integer power of a nonpositive base")
    return exp(b * log(a))
