import math

import numpy as np
import pytest

from charflow.core.exceptions import InvalidInputError, NegativeHeightError, TooShortError
from charflow.modules.exprlang.services.parser import parse
from charflow.modules.fields.services.types import CurveKind, Point
from charflow.modules.tracer.services.tracer_service import CurveTracer
from charflow.modules.variational.services.variational_service import (
    GraphCurve,
    LHFunctional,
    circle_arc,
    curve_from_function,
    euler_lagrange_residual,
    eval_LH,
    graph_curvature,
    minimize_LH,
    sup_distance_to_curve,
    to_curve,
)


def line(x0, y0, x1, y1, n):
    return curve_from_function(lambda x: y0 + (y1 - y0) * (x - x0) / (x1 - x0), x0, x1, n)


@pytest.mark.parametrize("H,y0,y1,expected", [
    (0.0, 1.0, 1.0, 1.0),
    (1.0, 1.0, 1.0, 0.0),
    (0.0, 1.0, 2.0, math.sqrt(2.0)),
    (2.0, 1.0, 2.0, math.sqrt(2.0) - 3.0),
])
def test_eval_LH_on_lines(H, y0, y1, expected):
    assert eval_LH(line(0.0, y0, 1.0, y1, 10), H) == pytest.approx(expected, abs=1e-12)


def test_H_sources_agree():
    c = line(0.0, 1.0, 1.0, 1.5, 20)
    expr = parse("x + y")
    by_expr = eval_LH(c, expr)
    by_callable = eval_LH(c, lambda x, y: x + y)
    assert by_expr == pytest.approx(by_callable, abs=1e-14)


def test_gradient_matches_finite_differences():
    c = curve_from_function(lambda x: 1.0 + 0.2 * np.sin(3 * x), 0.0, 1.0, 12)
    functional = LHFunctional(parse("1 + x*y"))
    grad = functional.gradient(c)
    h = 1e-6
    for i in range(1, c.n):
        up = c.y.copy()
        down = c.y.copy()
        up[i] += h
        down[i] -= h
        fd = (functional.value(GraphCurve(c.x0, c.x1, up)) - functional.value(GraphCurve(c.x0, c.x1, down))) / (2 * h)
        assert grad[i - 1] == pytest.approx(fd, abs=1e-7)


@pytest.mark.parametrize("H", ["1 + sin(x*y) + exp(-y)/2", "cos(3*y) - x*y^2"])
def test_gradient_is_the_derivative_of_the_gauss_area(H):
    c = curve_from_function(lambda x: 0.8 + 0.3 * np.cos(2 * x), 0.0, 1.5, 20)
    functional = LHFunctional(parse(H))
    grad = functional.gradient(c)
    h = 1e-5
    for i in range(1, c.n):
        up = c.y.copy()
        down = c.y.copy()
        up[i] += h
        down[i] -= h
        fd = (functional.value(GraphCurve(c.x0, c.x1, up)) - functional.value(GraphCurve(c.x0, c.x1, down))) / (2 * h)
        assert grad[i - 1] == pytest.approx(fd, abs=1e-8)


def test_H_zero_minimizer_is_the_chord():
    c0 = curve_from_function(lambda x: 1.0 + 0.5 * x + 0.1 * np.sin(math.pi * x), 0.0, 1.0, 100)
    c = minimize_LH(c0, 0.0)
    np.testing.assert_allclose(c.y, 1.0 + 0.5 * c.x, atol=1e-8)
    assert (c.y[0], c.y[-1]) == (c0.y[0], c0.y[-1])


def test_H_one_minimizer_is_a_unit_arc():
    c = minimize_LH(line(0.0, 1.0, 1.0, 1.0, 400), 1.0)
    arc = circle_arc(0.0, 1.0, 1.0, -1.0)
    assert np.max(np.abs(c.y - arc(c.x))) < 1e-4
    assert np.max(np.abs(euler_lagrange_residual(c, 1.0))) < 1e-4
    np.testing.assert_allclose(graph_curvature(c)[5:-5], -1.0, atol=1e-3)


def test_minimizer_does_not_increase_LH():
    c0 = line(0.0, 1.0, 1.0, 1.0, 50)
    c = minimize_LH(c0, parse("0.5 + 0.25*x"))
    assert eval_LH(c, parse("0.5 + 0.25*x")) <= eval_LH(c0, parse("0.5 + 0.25*x"))


def test_radial_minimizer_is_the_characteristic(radial):
    preset = radial.variational
    c0 = line(preset.x0, preset.y0, preset.x1, preset.y1, preset.nodes)
    c = minimize_LH(c0, radial.frame)
    traced = CurveTracer(radial.frame).trace(Point(preset.x0, preset.y0), CurveKind.CHARACTERISTIC,
                                             preset.trace_length)
    assert sup_distance_to_curve(c, traced) < 1e-3
    np.testing.assert_allclose(np.hypot(c.x, c.y), 2.0, atol=1e-3)


def test_euler_lagrange_flags_a_kink():
    c = curve_from_function(lambda x: 1.0 + np.abs(x - 0.5), 0.0, 1.0, 10)
    residual = euler_lagrange_residual(c, 0.0)
    assert np.max(np.abs(residual)) >= 0.1
    assert np.argmax(np.abs(residual)) == 4


def test_euler_lagrange_needs_an_interior_node():
    with pytest.raises(TooShortError):
        euler_lagrange_residual(GraphCurve(0.0, 1.0, np.array([1.0, 1.0])), 0.0)


def test_negative_heights_are_rejected():
    c = curve_from_function(lambda x: np.cos(3 * x), 0.0, 1.0, 10)
    with pytest.raises(NegativeHeightError):
        eval_LH(c, 0.0)


@pytest.mark.parametrize("x0,x1,y", [
    (0.0, 1.0, [1.0]),
    (1.0, 1.0, [1.0, 1.0]),
    (0.0, 1.0, [1.0, math.nan]),
])
def test_graph_curve_validation(x0, x1, y):
    with pytest.raises(InvalidInputError):
        GraphCurve(x0, x1, np.array(y))


def test_to_curve_orientation():
    c = line(0.0, 1.0, 1.0, 1.0, 10)
    curve = to_curve(c, 0.0)
    assert curve.info["source"] == "variational"
    np.testing.assert_allclose(curve.theta, math.pi / 2)
    np.testing.assert_allclose(curve.kappa, 0.0, atol=1e-12)
    assert curve.sigma[-1] == pytest.approx(1.0)


def test_circle_arc_rejects_long_chords():
    with pytest.raises(InvalidInputError):
        circle_arc(0.0, 3.0, 1.0, 1.0)
