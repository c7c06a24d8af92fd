"""Command-line interface."""

from charflow.cli.main import main

__all__ = ["main"]
