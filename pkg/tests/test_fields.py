import math

import numpy as np
import pytest

from charflow.core.exceptions import InvalidInputError, ModeError, SingularPointError
from charflow.modules.exprlang.services.parser import parse
from charflow.modules.fields.services.frame_service import FrameField
from charflow.modules.fields.services.rotation import FrameRotation
from charflow.modules.fields.services.types import Box, CurveKind, Point


def test_bilinear_frame_values(bilinear):
    sample = bilinear.frame.frame_at(Point(1.0, 0.5))
    assert sample.theta == pytest.approx(math.pi / 2)
    assert sample.N == pytest.approx((0.0, 1.0), abs=1e-15)
    assert sample.Nperp == pytest.approx((1.0, 0.0), abs=1e-15)
    assert sample.D == pytest.approx(2.0)
    assert sample.rotF == pytest.approx(2.0)
    assert sample.H == pytest.approx(0.0, abs=1e-8)


def test_radial_mean_curvature_is_inverse_radius(radial):
    for r in (0.5, 1.0, 2.0):
        assert radial.frame.mean_curvature(r, 0.0) == pytest.approx(1.0 / r)


def test_difference_quotient_curvature_matches_supplied_H(radial):
    derived = FrameField.direct(parse("atan2(y, x)"), name="radial-fd")
    for x, y in [(1.0, 0.0), (0.3, 1.2), (-1.5, -0.7)]:
        assert derived.mean_curvature(x, y) == pytest.approx(radial.frame.mean_curvature(x, y), rel=1e-6)


def test_theta_range():
    frame = FrameField.direct(parse("atan2(y, x)"))
    assert frame.theta(-1.0, 0.0) == pytest.approx(math.pi)
    assert -math.pi < frame.theta(-1.0, -1e-9) < 0


def test_velocity_families(radial):
    assert radial.frame.velocity(1.0, 0.0, CurveKind.CHARACTERISTIC) == pytest.approx((0.0, -1.0))
    assert radial.frame.velocity(1.0, 0.0, CurveKind.SEED) == pytest.approx((1.0, 0.0))


def test_singular_point_raises():
    frame = FrameField.graph(parse("x*y"), parse("-y"), parse("x"))
    with pytest.raises(SingularPointError) as info:
        frame.normal(0.0, 0.3)
    assert info.value.x == 0.0


def test_scan_singular_finds_the_y_axis(bilinear):
    hits = bilinear.frame.scan_singular(Box.square(1.0), 5)
    assert {p.x for p in hits} == {0.0}
    assert len(hits) == 5


@pytest.mark.parametrize("n", [0, 1])
def test_scan_singular_needs_two_points_per_side(bilinear, n):
    with pytest.raises(InvalidInputError):
        bilinear.frame.scan_singular(Box.square(1.0), n)


def test_constructor_rejects_bad_modes_and_missing_sources():
    with pytest.raises(InvalidInputError):
        FrameField("polar", theta=parse("x"))
    with pytest.raises(InvalidInputError):
        FrameField.graph(parse("x*y"), parse("-y"), None)
    with pytest.raises(InvalidInputError):
        FrameField("direct")


def test_graph_only_quantities_on_direct_field(radial):
    with pytest.raises(ModeError):
        radial.frame.D(1.0, 0.0)
    with pytest.raises(ModeError):
        radial.frame.rot_F(1.0, 0.0)


def test_direct_from_keeps_theta(bilinear):
    direct = FrameField.direct_from(bilinear.frame)
    assert not direct.is_graph
    assert direct.theta(1.2, 0.3) == pytest.approx(bilinear.frame.theta(1.2, 0.3))


def test_evaluate_arrays_shapes(bilinear):
    X, Y = np.meshgrid(np.linspace(0.5, 1.5, 3), np.linspace(-1.0, 1.0, 4), indexing="ij")
    arrays = bilinear.frame.evaluate_arrays(X, Y)
    assert arrays.N1.shape == X.shape
    np.testing.assert_allclose(arrays.D, 2.0 * X)
    np.testing.assert_allclose(arrays.rotF, 2.0)


def test_straightening_rotation(radial):
    p0 = Point(0.0, 1.0)
    rotation = FrameRotation.straightening(radial.frame, p0)
    assert rotation.local_angle(radial.frame.theta(*p0)) == pytest.approx(math.pi / 2)
    a, b = rotation.to_local(0.3, 1.4)
    x, y = rotation.to_global(a, b)
    assert (x, y) == pytest.approx((0.3, 1.4))


def test_point_and_box_validation():
    assert Point.parse("1.5,-2") == Point(1.5, -2.0)
    with pytest.raises(InvalidInputError):
        Point.parse("1;2")
    with pytest.raises(InvalidInputError):
        Point.of(math.nan, 0.0)
    with pytest.raises(InvalidInputError):
        Box.of(1.0, 0.0, 0.0, 1.0)
    box = Box.square(2.0)
    assert box.contains(2.0, 0.0)
    assert not box.contains(2.1, 0.0)
