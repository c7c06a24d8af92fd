"""Configuration for charts module."""

import math
import os


class ChartsConfig:
    """Chart construction and residual settings."""

    # RK4 step for the traces from grid points to the transversals
    STEP: float = 1e-2

    # Grid points per side (odd, so the transversals pass through grid rows)
    GRID: int = 21

    # Largest allowed |θ − π/2| on the chart square after straightening
    GUARD_ANGLE: float = math.pi / 6
    GUARD_SAMPLES: int = 11
    MAX_SHRINKS: int = 4

    # Offset for directional differences of f and g at grid points
    DIRECTIONAL_STEP: float = 1e-4

    # Grid points re-traced with half the step for the well-definedness check
    RETRACE_POINTS: int = 9

    @classmethod
    def from_env(cls):
        """Create config from environment variables."""
        config = cls()
        config.STEP = float(os.getenv("CHARFLOW_CHARTS_STEP", config.STEP))
        config.GRID = int(os.getenv("CHARFLOW_CHARTS_GRID", config.GRID))
        config.GUARD_ANGLE = float(os.getenv("CHARFLOW_CHARTS_GUARD_ANGLE", config.GUARD_ANGLE))
        config.GUARD_SAMPLES = int(os.getenv("CHARFLOW_CHARTS_GUARD_SAMPLES", config.GUARD_SAMPLES))
        config.MAX_SHRINKS = int(os.getenv("CHARFLOW_CHARTS_MAX_SHRINKS", config.MAX_SHRINKS))
        config.DIRECTIONAL_STEP = float(os.getenv("CHARFLOW_CHARTS_DIRECTIONAL_STEP", config.DIRECTIONAL_STEP))
        config.RETRACE_POINTS = int(os.getenv("CHARFLOW_CHARTS_RETRACE_POINTS", config.RETRACE_POINTS))
        return config
