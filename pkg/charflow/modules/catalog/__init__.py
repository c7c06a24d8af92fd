"""Catalog module."""

from charflow.modules.catalog.services.catalog_service import (
    CatalogEntry,
    ChartPreset,
    FunnelPreset,
    VariationalPreset,
    get,
    list_entries,
    resolve,
)

__all__ = ["CatalogEntry", "ChartPreset", "FunnelPreset", "VariationalPreset", "get", "list_entries", "resolve"]
