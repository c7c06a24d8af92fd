"""Flux identity checks over a set of polygons, as report entries."""

import logging
from typing import List, Optional, Sequence, Tuple

from charflow.core.exceptions import InvalidInputError, OrientationError
from charflow.modules.exprlang.services.nodes import Expr
from charflow.modules.exprlang.services.parser import parse
from charflow.modules.fields.services.frame_service import FrameField
from charflow.modules.flux.services.flux_service import FluxService
from charflow.modules.flux.services.polygon import PolygonDomain
from charflow.modules.report.services.report_service import make_entry, new_report
from charflow.modules.report.tolerances import ROUNDOFF_FLOOR, TolerancePolicy, default_policy
from charflow.schemas.report import ReportEntry, VerificationReport

logger = logging.getLogger(__name__)

DEFAULT_PHI = "x"

# residual(2k) <= residual(k) / REFINEMENT_CONTRACTION above the round-off floor
REFINEMENT_CONTRACTION = 3.0


def refinement_stalled(coarse: float, fine: float) -> bool:
    """True when a residual still above round-off did not shrink enough under refinement."""
    if coarse <= ROUNDOFF_FLOOR:
        return fine > ROUNDOFF_FLOOR
    return fine > max(coarse / REFINEMENT_CONTRACTION, ROUNDOFF_FLOOR)


def _split_pair(n: int) -> Tuple[int, int]:
    i = n // 4
    return i, i + n // 2


def flux_checks(field: FrameField, polygons: Sequence[Tuple[str, PolygonDomain]],
                phi: Optional[Expr] = None, policy: TolerancePolicy = default_policy,
                smooth: bool = True) -> VerificationReport:
    """Both flux identities (φ ≡ 1 and a test function), additivity, orientation and refinement.

    The refinement entry asks that doubling the refinement divides the residual of the N identity
    by at least REFINEMENT_CONTRACTION until it reaches the round-off floor. It is only judged for
    smooth fields.
    """
    phi = phi if phi is not None else parse(DEFAULT_PHI)
    service = FluxService(field)
    name = field.name
    entries: List[ReportEntry] = []

    def add(check, anchor, residual, **kwargs):
        entries.append(make_entry(check, anchor, residual, name, policy, **kwargs))

    for label, domain in polygons:
        where = f"{label} (refinement {domain.refinement})"
        plain = service.flux_N(domain)
        add("flux.N", f"∮ N·ν = ∫ H over {where}", plain.residual, note=f"lhs {plain.lhs:.17g}, rhs {plain.rhs:.17g}")
        weighted = service.flux_N(domain, phi)
        add("flux.N_phi", f"∮ φN·ν = ∫ ∇φ·N + φH over {where}, φ = {phi}", weighted.residual)
        if field.is_graph:
            d = service.flux_DNperp(domain)
            add("flux.DNperp", f"∮ DN⊥·ν = ∫ rot F over {where}", d.residual,
                note=f"lhs {d.lhs:.17g}, rhs {d.rhs:.17g}")
            dw = service.flux_DNperp(domain, phi)
            add("flux.DNperp_phi", f"∮ φDN⊥·ν = ∫ ∇φ·DN⊥ + φ rot F over {where}, φ = {phi}", dw.residual)

        i, j = _split_pair(len(domain))
        try:
            first, second = domain.split(i, j)
        except InvalidInputError as e:
            logger.warning(f"Additivity check skipped for {label}: {e.message}")
        else:
            parts = service.flux_N(first).lhs + service.flux_N(second).lhs
            add("flux.additivity", f"boundary flux of N is additive across the cut {i}-{j} of {label}",
                abs(plain.lhs - parts))

        try:
            PolygonDomain(domain.vertices[::-1], domain.order, domain.refinement)
            rejected = False
        except OrientationError:
            rejected = True
        add("flux.orientation", f"clockwise copy of {label} is rejected", 0.0 if rejected else 1.0)

        finer = service.flux_N(domain.with_refinement(2 * domain.refinement))
        stalled = refinement_stalled(plain.residual, finer.residual)
        ratio = finer.residual / plain.residual if plain.residual > 0 else 0.0
        add("flux.refinement",
            f"doubling the refinement divides the residual by {REFINEMENT_CONTRACTION:g} on {label}",
            1.0 if stalled else 0.0, judged=smooth,
            note=f"{plain.residual:.3e} -> {finer.residual:.3e}, ratio {ratio:.3g}")

    logger.info(f"Flux checks for {name}: {len(entries)} entries over {len(polygons)} polygon(s)")
    return new_report(name, {"polygons": [label for label, _ in polygons], "phi": str(phi)}, entries)
