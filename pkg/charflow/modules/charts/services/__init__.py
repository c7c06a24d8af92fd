"""Characteristic chart services."""
