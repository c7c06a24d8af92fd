"""Configuration for tracer module."""

import os


class TracerConfig:
    """Configuration for curve tracing."""

    # RK4 step and default trace length
    STEP: float = 1e-3
    LENGTH: float = 1.0

    # Root-finding tolerance when landing on a box boundary or a stop line
    CROSSING_XTOL: float = 1e-12

    # A landing step shorter than this fraction of STEP replaces the previous sample
    MIN_LANDING_FRACTION: float = 1e-3

    # Picard iteration
    PICARD_GRID: int = 2001
    PICARD_MAX_ITERS: int = 100
    PICARD_TOL: float = 1e-10

    # Funnel
    FUNNEL_BRANCHES: int = 3

    # Theorem A suite: coarsest step of the endpoint refinement study and the Picard window
    ENDPOINT_STEP: float = 0.02
    PICARD_SPAN: float = 0.5

    @classmethod
    def from_env(cls):
        """Create config from environment variables."""
        config = cls()
        config.STEP = float(os.getenv("CHARFLOW_TRACER_STEP", config.STEP))
        config.LENGTH = float(os.getenv("CHARFLOW_TRACER_LENGTH", config.LENGTH))
        config.CROSSING_XTOL = float(os.getenv("CHARFLOW_TRACER_CROSSING_XTOL", config.CROSSING_XTOL))
        config.PICARD_GRID = int(os.getenv("CHARFLOW_TRACER_PICARD_GRID", config.PICARD_GRID))
        config.PICARD_MAX_ITERS = int(
            os.getenv("CHARFLOW_TRACER_PICARD_MAX_ITERS", config.PICARD_MAX_ITERS)
        )
        config.PICARD_TOL = float(os.getenv("CHARFLOW_TRACER_PICARD_TOL", config.PICARD_TOL))
        config.FUNNEL_BRANCHES = int(
            os.getenv("CHARFLOW_TRACER_FUNNEL_BRANCHES", config.FUNNEL_BRANCHES)
        )
        config.ENDPOINT_STEP = float(os.getenv("CHARFLOW_TRACER_ENDPOINT_STEP", config.ENDPOINT_STEP))
        config.PICARD_SPAN = float(os.getenv("CHARFLOW_TRACER_PICARD_SPAN", config.PICARD_SPAN))
        return config
