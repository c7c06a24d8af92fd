"""Flux identity services."""
