"""Curve tracing services."""
