import math

import numpy as np
import pytest

from charflow.core.base_module import SuiteContext
from charflow.core.exceptions import InvalidInputError, ModeError, OrientationError
from charflow.modules.exprlang.services.parser import parse
from charflow.modules.fields.services.frame_service import FrameField
from charflow.modules.flux.module import polygons_for
from charflow.modules.flux.services.flux_checks import flux_checks, refinement_stalled
from charflow.modules.flux.services.flux_service import (
    FluxService,
    boundary_nodes,
    flux_DNperp,
    flux_N,
    interior_nodes,
)
from charflow.modules.flux.services.polygon import (
    PolygonDomain,
    rectangle_polygon,
    sector_polygon,
    wedge_polygon,
)

L_SHAPE = [(0.0, 0.0), (2.0, 0.0), (2.0, 1.0), (1.0, 1.0), (1.0, 2.0), (0.0, 2.0)]


def test_bilinear_rot_F_flux(bilinear):
    result = flux_DNperp(bilinear.frame, rectangle_polygon(1.0, 2.0, 0.0, 1.0))
    assert result.lhs == pytest.approx(2.0, abs=1e-12)
    assert result.rhs == pytest.approx(2.0, abs=1e-12)
    assert result.residual < 1e-9


def test_bilinear_weighted_rot_F_flux(bilinear):
    result = flux_DNperp(bilinear.frame, rectangle_polygon(1.0, 2.0, 0.0, 1.0), parse("x"))
    assert result.lhs == pytest.approx(6.0, abs=1e-10)
    assert result.residual < 1e-8


def test_radial_flux_of_N(radial):
    domain = sector_polygon(1.0, 2.0, 0.0, math.pi / 4, 64)
    result = flux_N(radial.frame, domain)
    assert result.residual < 1e-6
    assert result.rhs > 0


def test_catalog_polygons_default_to_refinement_256(radial, monkeypatch):
    monkeypatch.delenv("CHARFLOW_FLUX_REFINEMENT", raising=False)
    [(label, domain)] = polygons_for(SuiteContext(frame=radial.frame, entry=radial))
    assert domain.refinement == 256
    assert flux_N(radial.frame, domain).residual <= 1e-6


def test_rot_F_flux_needs_graph_mode(radial):
    with pytest.raises(ModeError):
        FluxService(radial.frame).flux_DNperp(rectangle_polygon(1.0, 2.0, 0.0, 1.0))


def test_bilinear_flux_report_passes(bilinear, policy):
    report = flux_checks(bilinear.frame, [("square", rectangle_polygon(1.0, 2.0, 0.0, 1.0))], policy=policy)
    checks = {e.check for e in report.entries}
    assert checks == {"flux.N", "flux.N_phi", "flux.DNperp", "flux.DNperp_phi", "flux.additivity",
                      "flux.orientation", "flux.refinement"}
    assert report.passed, report.failures()


@pytest.mark.parametrize("coarse,fine,stalled", [
    (1e-6, 1e-6, True),
    (1e-6, 4e-7, True),
    (1e-6, 3e-7, False),
    (1e-6, 5e-11, False),
    (1e-12, 1e-12, False),
    (1e-12, 1e-9, True),
])
def test_refinement_must_divide_the_residual_by_three(coarse, fine, stalled):
    assert refinement_stalled(coarse, fine) is stalled


def test_inconsistent_curvature_stalls_under_refinement():
    wrong_H = FrameField.direct(parse("atan2(y, x)"), parse("0"), name="radial-without-H")
    domain = sector_polygon(1.0, 2.0, 0.0, math.pi / 4, 16)
    report = flux_checks(wrong_H, [("sector", domain)])
    entry = report.entry("flux.refinement")
    assert entry.judged and not entry.passed
    assert "ratio 1" in entry.note
    relaxed = flux_checks(wrong_H, [("sector", domain)], smooth=False).entry("flux.refinement")
    assert not relaxed.judged


def test_lipschitz_rot_F_flux_across_the_kink(lipschitz_xy):
    square = rectangle_polygon(0.5, 1.5, -0.5, 0.5)
    result = flux_DNperp(lipschitz_xy.frame, square)
    assert result.rhs == pytest.approx(2.0, abs=1e-10)
    assert result.residual <= 1e-4
    report = flux_checks(lipschitz_xy.frame, [("square", square)])
    assert report.entry("flux.DNperp").passed


def test_direct_field_report_has_no_rot_F_entries(radial):
    domain = sector_polygon(1.0, 2.0, 0.0, math.pi / 4, 16)
    report = flux_checks(radial.frame, [("sector", domain)])
    assert not any(e.check.startswith("flux.DNperp") for e in report.entries)


def test_clockwise_polygon_is_rejected():
    with pytest.raises(OrientationError):
        PolygonDomain(L_SHAPE[::-1])


@pytest.mark.parametrize("vertices", [
    [(0.0, 0.0), (1.0, 0.0)],
    [(0.0, 0.0), (1.0, 0.0), (1.0, 0.0), (0.0, 1.0)],
    [(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)],
    [(0.0, 0.0), (1.0, 1.0), (1.0, 0.0), (0.0, 1.0)],
    [(0.0, 0.0), (1.0, math.nan), (0.0, 1.0)],
])
def test_invalid_polygons(vertices):
    with pytest.raises(InvalidInputError):
        PolygonDomain(vertices)


def test_nonconvex_triangulation_covers_the_area():
    domain = PolygonDomain(L_SHAPE)
    assert domain.area == pytest.approx(3.0)
    areas = [0.5 * abs((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))
             for a, b, c in domain.triangles]
    assert sum(areas) == pytest.approx(3.0)
    _, _, weights = interior_nodes(domain)
    assert weights.sum() == pytest.approx(3.0, abs=1e-12)
    _, _, w, _ = boundary_nodes(domain)
    assert w.sum() == pytest.approx(8.0, abs=1e-12)


def test_contains_excludes_the_boundary():
    domain = PolygonDomain(L_SHAPE)
    assert domain.contains(0.5, 0.5)
    assert not domain.contains(1.5, 1.5)
    assert not domain.contains(2.0, 0.5)


def test_split_is_additive(radial):
    domain = PolygonDomain(L_SHAPE)
    first, second = domain.split(0, 3)
    assert first.area + second.area == pytest.approx(domain.area)
    service = FluxService(radial.frame)
    shifted = PolygonDomain(np.asarray(L_SHAPE) + 0.5)
    a, b = shifted.split(0, 3)
    total = service.flux_N(shifted).lhs
    assert service.flux_N(a).lhs + service.flux_N(b).lhs == pytest.approx(total, abs=1e-10)


def test_split_needs_a_diagonal():
    domain = PolygonDomain(L_SHAPE)
    with pytest.raises(InvalidInputError):
        domain.split(0, 1)
    with pytest.raises(InvalidInputError):
        domain.split(1, 4)


def test_polygon_file(tmp_path):
    path = tmp_path / "square.json"
    path.write_text(rectangle_polygon(0.0, 1.0, 0.0, 1.0).to_json(), encoding="utf-8")
    domain = PolygonDomain.load(path, refinement=8)
    assert len(domain) == 4
    assert domain.refinement == 8


def test_wedge_orientation_is_fixed_from_area():
    lower = np.array([[0.0, 0.0], [1.0, 0.0]])
    upper = np.array([[0.0, 0.0], [1.0, 0.5]])
    assert wedge_polygon(lower, upper).area > 0
    assert wedge_polygon(upper, lower).area > 0
