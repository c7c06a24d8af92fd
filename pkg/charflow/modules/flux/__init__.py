"""Flux module."""

from charflow.modules.flux.services.flux_checks import flux_checks
from charflow.modules.flux.services.flux_service import FluxResult, FluxService, boundary_flux, flux_DNperp, flux_N
from charflow.modules.flux.services.polygon import PolygonDomain, rectangle_polygon, sector_polygon, wedge_polygon

__all__ = [
    "FluxResult",
    "FluxService",
    "PolygonDomain",
    "boundary_flux",
    "flux_DNperp",
    "flux_N",
    "flux_checks",
    "rectangle_polygon",
    "sector_polygon",
    "wedge_polygon",
]
