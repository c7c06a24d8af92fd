"""Schemas package for reports, charts and run configuration."""
