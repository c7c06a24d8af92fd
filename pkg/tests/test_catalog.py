import math

import numpy as np
import pytest

from charflow.core.exceptions import UnknownEntryError
from charflow.modules.catalog.services.catalog_service import get, list_entries, resolve
from charflow.modules.catalog.services.example_fields import quartic_case
from charflow.modules.fields.services.types import CurveKind, Point


def test_lists_the_built_in_fields():
    assert list_entries() == ["bilinear", "radial", "example32", "lipschitz_xy"]


def test_every_entry_has_ground_truth():
    for name in list_entries():
        entry = get(name)
        assert entry.name == name
        assert entry.characteristic_family
        assert entry.seed_family
        assert entry.sample_starts


def test_bilinear_with_g_resolves():
    entry = get("bilinear(y|y|)")
    assert entry.name == "bilinear(y|y|)"
    # g changes D = 2x + 2|y| but leaves the frame directions alone
    assert entry.frame.D(1.0, 0.5) == pytest.approx(3.0)
    assert entry.frame.velocity(1.0, 0.5, CurveKind.CHARACTERISTIC) == pytest.approx((1.0, 0.0))


def test_g_does_not_change_the_default_bilinear():
    assert get("bilinear(0)").name == "bilinear"


@pytest.mark.parametrize("name", ["nope", "bilinear(", "bilinear(y +)", "bilinear(x*y)"])
def test_unknown_entries(name):
    with pytest.raises(UnknownEntryError):
        get(name)


def test_resolve_field_file(tmp_path):
    path = tmp_path / "bilinear.field"
    path.write_text("u = x*y\nF1 = -y\nF2 = x\n", encoding="utf-8")
    frame, entry = resolve(str(path))
    assert entry is None
    assert frame.is_graph
    assert frame.theta(1.0, 0.2) == pytest.approx(math.pi / 2)


def test_resolve_catalog_name():
    frame, entry = resolve("radial")
    assert entry is not None and frame is entry.frame


@pytest.mark.parametrize("name", ["bilinear", "radial", "lipschitz_xy"])
def test_frame_directions_match_closed_forms(name, rng):
    entry = get(name)
    for p in entry.sample_points(25, rng, entry.box):
        for kind, tangent in ((CurveKind.CHARACTERISTIC, entry.characteristic_tangent),
                              (CurveKind.SEED, entry.seed_tangent)):
            v = entry.frame.velocity(p.x, p.y, kind)
            t = tangent(p.x, p.y)
            assert math.hypot(float(v[0]) - float(t[0]), float(v[1]) - float(t[1])) < 1e-10


def test_radial_endpoint_closed_form(radial):
    end = radial.characteristic_endpoint(Point(1.0, 0.0), math.pi / 2)
    assert end == pytest.approx((0.0, -1.0), abs=1e-15)


def test_quartic_cases():
    cases = quartic_case(np.array([1.0, 1.0, 1.0, 0.0]), np.array([2.0, 0.5, -1.0, 0.0]))
    assert list(cases) == [1, 2, 3, 3]


def test_example32_case1_curvature(example32):
    # along y = x^4 + c the curvature is 12 x^2 / (1 + 16 x^6)^{3/2}
    assert example32.frame.mean_curvature(1.0, 1.0) == pytest.approx(-12.0 * 17.0 ** -1.5, rel=1e-10)


def test_example32_lines_below_the_axis(example32):
    assert example32.frame.mean_curvature(0.7, -0.5) == 0.0
    assert example32.frame.velocity(0.7, -0.5, CurveKind.CHARACTERISTIC) == pytest.approx((1.0, 0.0))
