"""Declarative tolerance table: check name -> default tolerance.

A key of the form "<check>@<field>" overrides the plain check for one catalog field. Checks that
run a refinement study also carry a minimum convergence order in MIN_ORDERS.
"""

from typing import Dict, Mapping, Optional

from charflow.core.exceptions import UsageError

TOLERANCES: Dict[str, float] = {
    # curvature law along characteristics
    "theorem_a.curvature": 1e-4,
    "theorem_a.curvature@example32": 1e-1,
    "theorem_a.example32_case1_kappa": 1e-3,
    "theorem_a.example32_case3_kappa": 1e-6,
    "theorem_a.reversibility": 1e-8,
    "theorem_a.rk4_endpoint": 1e-8,
    "theorem_a.picard_agreement": 1e-6,
    "theorem_a.variational_agreement": 1e-3,
    "theorem_a.curve_invariance_ug": 1e-8,
    "theorem_a.lipschitz_seed_geometry": 1e-4,
    "theorem_a.catalog_tangency": 1e-10,
    # funnels
    "funnel.separation": 1.0,
    "funnel.nonuniqueness_limit": 5e-2,
    # charts
    "charts.s_closed_form": 1e-8,
    "charts.f_closed_form": 1e-8,
    "charts.t_closed_form": 1e-8,
    "charts.g_closed_form": 1e-6,
    "charts.grad_s": 1e-3,
    "charts.grad_s@bilinear": 1e-6,
    "charts.grad_t": 1e-3,
    "charts.grad_t@bilinear": 1e-6,
    "charts.transport_f": 1e-3,
    "charts.transport_f@bilinear": 1e-6,
    "charts.transport_g": 1e-3,
    "charts.transport_g@bilinear": 1e-6,
    "charts.metric": 1e-3,
    "charts.metric@bilinear": 1e-6,
    "charts.f_vs_grad_s": 1e-4,
    "charts.jacobian_positive": 0.0,
    "charts.density_positive": 0.0,
    "charts.retrace": 1e-8,
    "charts.transversal_monotone": 0.0,
    "charts.grad_s_order": 1e-3,
    # theta derivatives
    "theta.s_identity": 1e-4,
    "theta.s_identity@bilinear": 1e-8,
    "theta.t_identity": 1e-4,
    "theta.t_identity@bilinear": 1e-8,
    "theta.mixed_x": 1e-5,
    "theta.mixed_y": 1e-5,
    # flux identities
    "flux.N": 1e-6,
    "flux.N@bilinear": 1e-8,
    "flux.N_phi": 1e-6,
    "flux.DNperp": 1e-9,
    "flux.DNperp@lipschitz_xy": 1e-4,
    "flux.DNperp_phi": 1e-8,
    "flux.DNperp_phi@lipschitz_xy": 1e-4,
    "flux.additivity": 1e-10,
    "flux.orientation": 0.0,
    "flux.refinement": 0.0,
    # variational oracle
    "variational.euler_lagrange": 1e-4,
}

MIN_ORDERS: Dict[str, float] = {
    "theorem_a.curvature": 1.9,
    "theorem_a.rk4_endpoint": 3.9,
    "charts.grad_s_order": 1.8,
}

# Residuals below this are round-off; a refinement study that reaches it counts as saturated
ROUNDOFF_FLOOR: float = 1e-10


class TolerancePolicy:
    """Tolerance lookup with per-run overrides (from --tol or tol.<name> config lines)."""

    def __init__(self, overrides: Optional[Mapping[str, float]] = None):
        self.overrides: Dict[str, float] = dict(overrides or {})

    @classmethod
    def from_pairs(cls, pairs) -> "TolerancePolicy":
        """Parse ["name=value", ...]."""
        overrides = {}
        for pair in pairs or []:
            name, sep, value = pair.partition("=")
            if not sep:
                raise UsageError(f"tolerance override must look like name=value, got {pair!r}")
            try:
                overrides[name.strip()] = float(value)
            except ValueError as e:
                raise UsageError(f"tolerance for {name.strip()!r} is not a number: {value!r}") from e
        return cls(overrides)

    def tolerance(self, check: str, field: Optional[str] = None) -> Optional[float]:
        keys = ([f"{check}@{field}"] if field else []) + [check]
        for table in (self.overrides, TOLERANCES):
            for key in keys:
                if key in table:
                    return table[key]
        return None

    def min_order(self, check: str) -> Optional[float]:
        return MIN_ORDERS.get(check)


default_policy = TolerancePolicy()
