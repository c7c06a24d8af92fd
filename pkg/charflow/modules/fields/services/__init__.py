"""Frame field services."""
