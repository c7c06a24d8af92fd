"""Configuration for variational module."""

import os


class VariationalConfig:
    """Minimizer settings for the discrete L_H functional."""

    TOL: float = 1e-12
    MAX_ITERS: int = 100
    ARMIJO: float = 1e-4
    MAX_BACKTRACKS: int = 50

    # Gauss-Legendre points for the vertical integral in each strip
    INNER_ORDER: int = 8

    # Difference step for ∂H/∂y in the Hessian
    H_FD_STEP: float = 1e-6

    @classmethod
    def from_env(cls):
        """Create config from environment variables."""
        config = cls()
        config.TOL = float(os.getenv("CHARFLOW_VARIATIONAL_TOL", config.TOL))
        config.MAX_ITERS = int(os.getenv("CHARFLOW_VARIATIONAL_MAX_ITERS", config.MAX_ITERS))
        config.ARMIJO = float(os.getenv("CHARFLOW_VARIATIONAL_ARMIJO", config.ARMIJO))
        config.MAX_BACKTRACKS = int(os.getenv("CHARFLOW_VARIATIONAL_MAX_BACKTRACKS", config.MAX_BACKTRACKS))
        config.INNER_ORDER = int(os.getenv("CHARFLOW_VARIATIONAL_INNER_ORDER", config.INNER_ORDER))
        config.H_FD_STEP = float(os.getenv("CHARFLOW_VARIATIONAL_H_FD_STEP", config.H_FD_STEP))
        return config
