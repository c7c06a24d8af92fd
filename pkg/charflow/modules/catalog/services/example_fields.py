"""The three-case quartic field: θ and H assembled piecewise from a family of graph curves.

Case 1 (y > x⁴): curves y = x⁴ + c.
Case 2 (0 < y ≤ x⁴): curves y = c·x⁴ with 0 < c ≤ 1.
Case 3 (y ≤ 0): horizontal lines.
A point on a seam belongs to the higher-numbered case.
"""

import numpy as np

from charflow.modules.exprlang.services import dual
from charflow.modules.exprlang.services.dual import Dual2, Scalar


def quartic_case(x: Scalar, y: Scalar) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return np.where(y <= 0.0, 3, np.where(y <= x ** 4, 2, 1))


def _slope_and_second(x: Scalar, y: Scalar):
    """φ' and φ'' of the family member through (x, y), as dual numbers."""
    case = quartic_case(x, y)
    xa = np.asarray(x, dtype=float)
    safe_x = np.where(case == 2, xa, 1.0)
    X = Dual2.variable_x(np.broadcast_to(xa, case.shape).astype(float))
    Y = Dual2.variable_y(np.broadcast_to(np.asarray(y, dtype=float), case.shape).astype(float))
    Xs = Dual2.variable_x(np.broadcast_to(safe_x, case.shape).astype(float))

    slope1 = 4.0 * dual.power(X, 3.0)
    second1 = 12.0 * X * X
    slope2 = 4.0 * Y / Xs
    second2 = 12.0 * Y / (Xs * Xs)
    zero = Dual2(np.zeros(case.shape), np.zeros(case.shape), np.zeros(case.shape))

    slope = dual.where(case == 1, slope1, dual.where(case == 2, slope2, zero))
    second = dual.where(case == 1, second1, dual.where(case == 2, second2, zero))
    return slope, second


def quartic_theta(x: Scalar, y: Scalar) -> Dual2:
    """θ with N⊥ equal to the unit tangent (1, φ') of the family member, oriented toward +x."""
    slope, _ = _slope_and_second(x, y)
    return dual.atan2(dual.lift(1.0), -slope)


def quartic_curvature(x: Scalar, y: Scalar) -> Dual2:
    """Signed curvature φ''/(1 + φ'²)^{3/2} of the family member through (x, y)."""
    slope, second = _slope_and_second(x, y)
    return second / dual.power(1.0 + slope * slope, 1.5)


def quartic_H(x: Scalar, y: Scalar) -> Dual2:
    return -quartic_curvature(x, y)
