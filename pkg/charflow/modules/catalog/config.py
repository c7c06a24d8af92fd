"""Configuration for catalog module."""

import os


class CatalogConfig:
    """Catalog self-check settings."""

    # Random points per entry for closed-form consistency checks
    CONSISTENCY_SAMPLES: int = 100
    RANDOM_SEED: int = 20240611

    @classmethod
    def from_env(cls):
        """Create config from environment variables."""
        config = cls()
        config.CONSISTENCY_SAMPLES = int(
            os.getenv("CHARFLOW_CATALOG_CONSISTENCY_SAMPLES", config.CONSISTENCY_SAMPLES)
        )
        config.RANDOM_SEED = int(os.getenv("CHARFLOW_CATALOG_RANDOM_SEED", config.RANDOM_SEED))
        return config
