"""Feature modules of charflow."""

from typing import TYPE_CHECKING, List

if TYPE_CHECKING:
    from charflow.core.base_module import BaseModule


def get_all_suites() -> List["BaseModule"]:
    """One instance of every verification suite, in registration order."""
    from charflow.modules.charts.module import ChartsSuite, ThetaDerivativeSuite
    from charflow.modules.flux.module import FluxSuite
    from charflow.modules.tracer.module import FunnelSuite, TheoremASuite

    return [TheoremASuite(), FunnelSuite(), ChartsSuite(), ThetaDerivativeSuite(), FluxSuite()]


__all__ = ["get_all_suites"]
