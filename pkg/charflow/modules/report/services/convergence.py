"""Empirical convergence orders from refinement studies."""

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from charflow.core.exceptions import InvalidInputError
from charflow.modules.report.tolerances import ROUNDOFF_FLOOR


@dataclass(frozen=True)
class OrderEstimate:
    order: Optional[float]
    saturated: bool
    levels: int

    def meets(self, minimum: Optional[float]) -> bool:
        if minimum is None or self.saturated:
            return True
        return self.order is not None and self.order >= minimum


def convergence_order(errors: Sequence[float], ratio: float = 2.0) -> float:
    """Least-squares order p from errors at step sizes h, h/ratio, h/ratio², ..."""
    e = np.asarray(errors, dtype=float)
    if len(e) < 2 or np.any(e <= 0) or not np.all(np.isfinite(e)):
        raise InvalidInputError("order estimation needs at least 2 positive finite errors")
    k = np.arange(len(e))
    slope = np.polyfit(k * np.log(ratio), np.log(e), 1)[0]
    return float(-slope)


def estimate_order(errors: Sequence[float], ratio: float = 2.0, floor: float = ROUNDOFF_FLOOR) -> OrderEstimate:
    """Order over the levels still above the round-off floor; saturated if fewer than 2 remain."""
    e = np.asarray(errors, dtype=float)
    above = e[e > floor]
    if not np.all(np.isfinite(e)):
        return OrderEstimate(order=None, saturated=False, levels=len(e))
    if len(above) < 2 or e[-1] <= floor:
        return OrderEstimate(order=None, saturated=True, levels=len(e))
    return OrderEstimate(order=convergence_order(above, ratio), saturated=False, levels=len(e))
