import numpy as np
import pytest

from charflow.core.exceptions import InvalidInputError, ModeError
from charflow.modules.charts.services.chart_service import build_chart, chart_from_model, chart_to_model
from charflow.modules.charts.services.residuals import (
    chart_residuals,
    chart_summary,
    grad_s_refinement,
    theta_derivative_checks,
)
from charflow.modules.fields.services.types import Point
from charflow.schemas.chart import ChartModel


@pytest.fixture(scope="module")
def bilinear_chart(bilinear):
    return build_chart(bilinear.frame, Point(1.0, 0.5), 0.2, 7, 0.01)


def test_bilinear_coordinates_in_closed_form(bilinear_chart):
    chart = bilinear_chart
    assert chart.rotation.angle == pytest.approx(0.0, abs=1e-15)
    np.testing.assert_allclose(chart.s, chart.X, atol=1e-10)
    np.testing.assert_allclose(chart.t, chart.Y, atol=1e-10)
    np.testing.assert_allclose(chart.f, 1.0, atol=1e-10)
    np.testing.assert_allclose(chart.g, 1.0 / (2.0 * chart.X), rtol=1e-7)


def test_chart_center_is_its_own_foot(bilinear_chart):
    m = bilinear_chart.mid
    assert bilinear_chart.s[m, m] == pytest.approx(1.0, abs=1e-14)
    assert bilinear_chart.t[m, m] == pytest.approx(0.5, abs=1e-14)


def test_bilinear_residual_report(bilinear, bilinear_chart):
    report = chart_residuals(bilinear_chart, bilinear.frame, bilinear.chart)
    for check in ("charts.s_closed_form", "charts.t_closed_form", "charts.f_closed_form",
                  "charts.g_closed_form", "charts.grad_s", "charts.grad_t", "charts.f_vs_grad_s",
                  "charts.density_positive", "charts.jacobian_positive", "charts.transversal_monotone"):
        entry = report.entry(check)
        assert entry.passed, entry
    summary = chart_summary(report)
    assert set(summary) == {e.check for e in report.entries}


def test_bilinear_theta_derivatives(bilinear, bilinear_chart):
    report = theta_derivative_checks(bilinear_chart, bilinear.frame)
    assert [e.check for e in report.entries] == ["theta.s_identity", "theta.t_identity",
                                                 "theta.mixed_x", "theta.mixed_y"]
    assert report.entry("theta.s_identity").passed
    assert report.entry("theta.t_identity").passed


def test_radial_chart_closed_forms(radial):
    chart = build_chart(radial.frame, Point(1.0, 0.0), 0.1, 5, 0.01)
    assert not chart.has_t and chart.g is None
    np.testing.assert_allclose(chart.s, 1.0 - chart.Y / chart.X, atol=1e-9)
    np.testing.assert_allclose(chart.f, np.hypot(chart.X, chart.Y) / chart.X ** 2, rtol=1e-7)


def test_theta_checks_need_graph_mode(radial):
    chart = build_chart(radial.frame, Point(1.0, 0.0), 0.1, 5, 0.01)
    with pytest.raises(ModeError):
        theta_derivative_checks(chart, radial.frame)


@pytest.mark.parametrize("n,r", [(4, 0.2), (6, 0.2), (3, 0.2), (7, 0.0), (7, -1.0)])
def test_invalid_chart_arguments(bilinear, n, r):
    with pytest.raises(InvalidInputError):
        build_chart(bilinear.frame, Point(1.0, 0.5), r, n)


def test_chart_json_round_trip(bilinear_chart):
    model = chart_to_model(bilinear_chart, {"charts.grad_s": 1e-12})
    back = chart_from_model(ChartModel.model_validate_json(model.model_dump_json()))
    np.testing.assert_array_equal(back.s, bilinear_chart.s)
    np.testing.assert_array_equal(back.g, bilinear_chart.g)
    assert back.center == bilinear_chart.center
    assert back.rotation.angle == bilinear_chart.rotation.angle


@pytest.mark.slow
def test_grad_s_refinement_on_radial(radial):
    entry = grad_s_refinement(radial.frame, Point(1.0, 0.0), 0.3, (11, 21, 41))
    assert entry.refinement_levels == 3
    assert entry.passed, entry
