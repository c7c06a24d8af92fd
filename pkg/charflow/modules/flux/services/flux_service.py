"""Boundary and interior quadratures for the divergence identities of N and DN⊥."""

import logging
import math
from dataclasses import asdict, dataclass
from typing import Callable, Optional, Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss

from charflow.modules.exprlang.services.nodes import Expr
from charflow.modules.fields.services.frame_service import FrameField
from charflow.modules.flux.services.polygon import PolygonDomain, max_edge_length

BoundaryIntegrand = Callable[[np.ndarray, np.ndarray, np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class FluxResult:
    lhs: float
    rhs: float
    residual: float
    refinement: int

    def to_dict(self) -> dict:
        return asdict(self)


def _unit_rule(order: int) -> Tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on [0, 1]."""
    nodes, weights = leggauss(order)
    return 0.5 * (nodes + 1.0), 0.5 * weights


def boundary_nodes(domain: PolygonDomain) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """(x, y, weight, outward normal) for composite Gauss-Legendre on every edge."""
    t, w = _unit_rule(domain.order)
    xs, ys, ws, ns = [], [], [], []
    for (a, b), normal in zip(zip(*domain.edges), domain.outward_normals()):
        length = math.dist(a, b)
        m = max(1, math.ceil(length * domain.refinement - 1e-9))
        starts = np.arange(m)[:, None] / m
        u = (starts + t[None, :] / m).ravel()
        xs.append(a[0] + u * (b[0] - a[0]))
        ys.append(a[1] + u * (b[1] - a[1]))
        ws.append(np.tile(w, m) * (length / m))
        ns.append(np.broadcast_to(normal, (m * len(t), 2)))
    return np.concatenate(xs), np.concatenate(ys), np.concatenate(ws), np.concatenate(ns)


def _subdivide(tri: np.ndarray, k: int) -> np.ndarray:
    """Split a triangle into k² congruent pieces, shape (k², 3, 2)."""
    a, b, c = tri
    pieces = []

    def node(i, j):
        return a + (i / k) * (b - a) + (j / k) * (c - a)

    for i in range(k):
        for j in range(k - i):
            pieces.append((node(i, j), node(i + 1, j), node(i, j + 1)))
            if i + j <= k - 2:
                pieces.append((node(i + 1, j), node(i + 1, j + 1), node(i, j + 1)))
    return np.array(pieces)


def interior_nodes(domain: PolygonDomain) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(x, y, weight) for collapsed Gauss-Legendre over a subdivided ear-clipping triangulation."""
    t, w = _unit_rule(domain.order)
    U, V = np.meshgrid(t, t, indexing="ij")
    WU, WV = np.meshgrid(w, w, indexing="ij")
    U, V, W = U.ravel(), V.ravel(), (WU * WV).ravel()
    h = domain.interior_factor / domain.refinement
    xs, ys, ws = [], [], []
    for tri in domain.triangles:
        k = max(1, math.ceil(max_edge_length(tri) / h - 1e-9))
        pieces = _subdivide(tri, k)
        a, b, c = pieces[:, 0, :], pieces[:, 1, :], pieces[:, 2, :]
        area = 0.5 * np.abs((b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1]) - (b[:, 1] - a[:, 1]) * (c[:, 0] - a[:, 0]))
        px = a[:, None, 0] + U[None, :] * (b[:, None, 0] - a[:, None, 0]) + (U * V)[None, :] * (c[:, None, 0] - b[:, None, 0])
        py = a[:, None, 1] + U[None, :] * (b[:, None, 1] - a[:, None, 1]) + (U * V)[None, :] * (c[:, None, 1] - b[:, None, 1])
        xs.append(px.ravel())
        ys.append(py.ravel())
        ws.append((2.0 * area[:, None] * (U * W)[None, :]).ravel())
    return np.concatenate(xs), np.concatenate(ys), np.concatenate(ws)


def _test_function(phi: Optional[Expr], X: np.ndarray, Y: np.ndarray):
    """φ and ∇φ on the nodes; φ ≡ 1 when absent."""
    if phi is None:
        return np.ones_like(X), np.zeros_like(X), np.zeros_like(X)
    d = phi.eval_dual(X, Y)
    return (np.broadcast_to(d.value, X.shape), np.broadcast_to(d.dx, X.shape), np.broadcast_to(d.dy, X.shape))


class FluxService:
    """Evaluates both sides of the flux identities for one frame field."""

    def __init__(self, field: FrameField):
        self.field = field
        self.logger = logging.getLogger(f"{__name__}.FluxService")

    def boundary_flux(self, domain: PolygonDomain, integrand: BoundaryIntegrand) -> float:
        """∮ integrand(x, y, ν1, ν2) ds over the polygon boundary."""
        X, Y, W, nu = boundary_nodes(domain)
        return float(np.sum(W * integrand(X, Y, nu[:, 0], nu[:, 1])))

    def flux_N(self, domain: PolygonDomain, phi: Optional[Expr] = None) -> FluxResult:
        """∮ φ N·ν against ∫ (∇φ)·N + φH."""

        def integrand(X, Y, n1, n2):
            fa = self.field.evaluate_arrays(X, Y)
            value = _test_function(phi, X, Y)[0]
            return value * (fa.N1 * n1 + fa.N2 * n2)

        lhs = self.boundary_flux(domain, integrand)
        X, Y, W = interior_nodes(domain)
        fa = self.field.evaluate_arrays(X, Y)
        value, gx, gy = _test_function(phi, X, Y)
        rhs = float(np.sum(W * (gx * fa.N1 + gy * fa.N2 + value * fa.H)))
        return self._result("N", domain, lhs, rhs)

    def flux_DNperp(self, domain: PolygonDomain, phi: Optional[Expr] = None) -> FluxResult:
        """∮ φ D N⊥·ν against ∫ (∇φ)·(D N⊥) + φ rot F."""
        self.field.require_graph("flux of D N⊥")

        def integrand(X, Y, n1, n2):
            fa = self.field.evaluate_arrays(X, Y)
            value = _test_function(phi, X, Y)[0]
            return value * fa.D * (fa.N2 * n1 - fa.N1 * n2)

        lhs = self.boundary_flux(domain, integrand)
        X, Y, W = interior_nodes(domain)
        fa = self.field.evaluate_arrays(X, Y)
        value, gx, gy = _test_function(phi, X, Y)
        rhs = float(np.sum(W * (fa.D * (gx * fa.N2 - gy * fa.N1) + value * fa.rotF)))
        return self._result("DN⊥", domain, lhs, rhs)

    def _result(self, label: str, domain: PolygonDomain, lhs: float, rhs: float) -> FluxResult:
        result = FluxResult(lhs=lhs, rhs=rhs, residual=abs(lhs - rhs), refinement=domain.refinement)
        self.logger.debug(
            f"Flux of {label} over {len(domain)}-gon at refinement {domain.refinement}: "
            f"lhs={lhs:.12g} rhs={rhs:.12g} residual={result.residual:.3g}"
        )
        return result


def flux_N(field: FrameField, domain: PolygonDomain, phi: Optional[Expr] = None) -> FluxResult:
    return FluxService(field).flux_N(domain, phi)


def flux_DNperp(field: FrameField, domain: PolygonDomain, phi: Optional[Expr] = None) -> FluxResult:
    return FluxService(field).flux_DNperp(domain, phi)


def boundary_flux(field: FrameField, domain: PolygonDomain, integrand: BoundaryIntegrand) -> float:
    return FluxService(field).boundary_flux(domain, integrand)
