"""charflow - characteristic curves, charts and identity checks for prescribed p-mean curvature fields."""

__version__ = "1.0.0"
