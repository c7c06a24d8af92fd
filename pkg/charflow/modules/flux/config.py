"""Configuration for flux module."""

import os


class FluxConfig:
    """Quadrature settings for the divergence identities."""

    # Gauss-Legendre points per boundary segment and per triangle direction
    ORDER: int = 8

    # Boundary segments have length <= 1/REFINEMENT
    REFINEMENT: int = 256

    # Interior triangles are subdivided into pieces of diameter <= INTERIOR_FACTOR/REFINEMENT
    INTERIOR_FACTOR: float = 8.0

    # Points closer than this to the boundary count as outside
    GRAZING_DISTANCE: float = 1e-12

    @classmethod
    def from_env(cls):
        """Create config from environment variables."""
        config = cls()
        config.ORDER = int(os.getenv("CHARFLOW_FLUX_ORDER", config.ORDER))
        config.REFINEMENT = int(os.getenv("CHARFLOW_FLUX_REFINEMENT", config.REFINEMENT))
        config.INTERIOR_FACTOR = float(os.getenv("CHARFLOW_FLUX_INTERIOR_FACTOR", config.INTERIOR_FACTOR))
        config.GRAZING_DISTANCE = float(os.getenv("CHARFLOW_FLUX_GRAZING_DISTANCE", config.GRAZING_DISTANCE))
        return config
