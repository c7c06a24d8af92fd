"""Flux identity verification suite."""

from typing import List, Tuple

from charflow.core.base_module import BaseModule, SuiteContext
from charflow.modules.exprlang.services.parser import parse
from charflow.modules.flux.config import FluxConfig
from charflow.modules.flux.services.flux_checks import flux_checks
from charflow.modules.flux.services.polygon import PolygonDomain
from charflow.schemas.report import VerificationReport


def polygons_for(context: SuiteContext) -> List[Tuple[str, PolygonDomain]]:
    """The run's polygon file, else the catalog entry's polygons, at the requested refinement."""
    run = context.config
    config = FluxConfig.from_env()
    refinement = run.refinement or config.REFINEMENT
    order = run.order or config.ORDER
    if run.polygon is not None:
        return [(run.polygon, PolygonDomain.load(run.polygon, order=order, refinement=refinement))]
    if context.entry is None:
        return []
    out = []
    for label, build in context.entry.flux_polygons:
        domain = build()
        out.append((label, PolygonDomain(domain.vertices, order, refinement)))
    return out


class FluxSuite(BaseModule):
    """Divergence identities for N and D N⊥ on polygons."""

    def __init__(self):
        super().__init__(
            name="flux",
            version="1.0.0",
            description="Weak forms of div N = H and div(DN⊥) = rot F",
        )
        self.config = None

    async def initialize(self) -> None:
        self.config = FluxConfig.from_env()

    def applies_to(self, context: SuiteContext) -> bool:
        return bool(polygons_for(context))

    def run(self, context: SuiteContext) -> VerificationReport:
        phi = parse(context.config.phi) if context.config.phi else None
        smooth = context.entry.smooth if context.entry is not None else True
        return flux_checks(context.frame, polygons_for(context), phi, context.policy, smooth)
