"""Configuration for fields module."""

import os


class FieldsConfig:
    """Configuration for frame evaluation."""

    # Graph-mode points with |∇u + F| below this are singular
    SINGULAR_THRESHOLD: float = 1e-8

    # Central-difference step for H, scaled by max(1, |p|)
    FD_STEP: float = 1e-5

    # Default grid size for singular-set scans
    SCAN_GRID: int = 21

    @classmethod
    def from_env(cls):
        """Create config from environment variables."""
        config = cls()
        config.SINGULAR_THRESHOLD = float(
            os.getenv("CHARFLOW_FIELDS_SINGULAR_THRESHOLD", config.SINGULAR_THRESHOLD)
        )
        config.FD_STEP = float(os.getenv("CHARFLOW_FIELDS_FD_STEP", config.FD_STEP))
        config.SCAN_GRID = int(os.getenv("CHARFLOW_FIELDS_SCAN_GRID", config.SCAN_GRID))
        return config
