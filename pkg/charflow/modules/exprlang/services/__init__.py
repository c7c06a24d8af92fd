"""Expression language services."""
