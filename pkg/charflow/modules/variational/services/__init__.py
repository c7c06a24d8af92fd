"""Variational oracle services."""
