import io
import math

import pytest
from pydantic import ValidationError
from rich.console import Console

from charflow.core.exceptions import InvalidInputError, UsageError
from charflow.modules.report.services.convergence import convergence_order, estimate_order
from charflow.modules.report.services.report_service import (
    from_json,
    make_entry,
    merge,
    new_report,
    render_text,
    to_json,
    write_report,
)
from charflow.modules.report.tolerances import ROUNDOFF_FLOOR, TolerancePolicy
from charflow.schemas.report import ReportEntry, VerificationReport
from charflow.schemas.run_config import RunConfig


def test_entry_passes_within_tolerance(policy):
    entry = make_entry("theorem_a.curvature", "κ + H = 0", [1e-6, 3e-5], "radial", policy)
    assert entry.passed
    assert entry.tolerance == 1e-4
    assert entry.max_residual == pytest.approx(3e-5)
    assert entry.mean_residual == pytest.approx(1.55e-5)
    assert entry.n_samples == 2


def test_entry_fails_above_tolerance(policy):
    assert not make_entry("theorem_a.curvature", "", 2e-4, "radial", policy).passed


def test_per_field_tolerance(policy):
    assert policy.tolerance("theorem_a.curvature", "example32") == 1e-1
    assert policy.tolerance("theorem_a.curvature", "radial") == 1e-4
    assert policy.tolerance("charts.grad_s", "bilinear") == 1e-6


def test_overrides_win(policy):
    custom = TolerancePolicy.from_pairs(["theorem_a.curvature=1e-9", "flux.N@radial = 0.5"])
    assert custom.tolerance("theorem_a.curvature", "radial") == 1e-9
    assert custom.tolerance("flux.N", "radial") == 0.5
    assert custom.tolerance("flux.N", "bilinear") == 1e-8


@pytest.mark.parametrize("pair", ["theorem_a.curvature", "flux.N=abc"])
def test_bad_override(pair):
    with pytest.raises(UsageError):
        TolerancePolicy.from_pairs([pair])


def test_entry_from_residuals(policy):
    entry = ReportEntry.from_residuals("flux.N", [1e-12, 2e-12], "radial", anchor="∮ N·ν = ∫ H")
    assert entry.passed
    assert entry.anchor == "∮ N·ν = ∫ H"
    assert entry.tolerance == policy.tolerance("flux.N", "radial")


def test_non_finite_residual_fails(policy):
    entry = make_entry("flux.N", "", [1e-12, math.nan], "radial", policy)
    assert not entry.passed
    assert entry.max_residual is None
    assert "non-finite" in entry.note


def test_unknown_check_is_unjudged(policy):
    entry = make_entry("made.up", "", 1.0, None, policy)
    assert not entry.judged
    assert VerificationReport(entries=[entry]).passed


def test_order_requirement(policy):
    errors = [1.6e-3, 4e-4, 1e-4]
    good = estimate_order(errors)
    assert good.order == pytest.approx(2.0)
    entry = make_entry("charts.grad_s_order", "", errors[-1], "radial", policy, order=good)
    assert entry.passed
    assert entry.convergence_order == pytest.approx(2.0)
    assert entry.refinement_levels == 3
    slow = estimate_order([4e-4, 2.8e-4, 2e-4])
    assert not make_entry("charts.grad_s_order", "", 2e-4, "radial", policy, order=slow).passed


def test_saturated_study_passes(policy):
    estimate = estimate_order([1e-9, 1e-11, 1e-12])
    assert estimate.saturated and estimate.order is None
    entry = make_entry("theorem_a.rk4_endpoint", "", 1e-12, "radial", policy, order=estimate)
    assert entry.passed
    assert entry.convergence_order is None
    assert "saturated" in entry.note


def test_convergence_order_input_checks():
    with pytest.raises(InvalidInputError):
        convergence_order([1e-3])
    with pytest.raises(InvalidInputError):
        convergence_order([1e-3, 0.0])
    assert ROUNDOFF_FLOOR == 1e-10


def test_order_needs_three_levels():
    with pytest.raises(ValidationError):
        ReportEntry(check="x", convergence_order=2.0, refinement_levels=2)


def test_merge_is_order_independent(policy):
    a = new_report("radial", {"suite": "theorem-a"}, [make_entry("theorem_a.curvature", "", 1e-6, "radial", policy)])
    b = new_report("bilinear", {"suite": "flux"}, [make_entry("flux.N", "", 1e-12, "bilinear", policy)])
    ab = merge(a, b).deterministic_dump()
    ba = merge(b, a).deterministic_dump()
    assert ab == ba
    assert [e["check"] for e in ab["entries"]] == ["flux.N", "theorem_a.curvature"]
    assert ab["metadata"]["field"] == ["bilinear", "radial"]
    assert "timestamp" not in ab["metadata"]


def test_merge_accepts_a_list(policy):
    r = new_report("radial", None, [make_entry("flux.N", "", 0.0, "radial", policy)])
    assert len(merge([r, r]).entries) == 2


def test_json_round_trip(policy, tmp_path):
    report = new_report("radial", {"step": 1e-3}, [make_entry("flux.N", "∮ N·ν = ∫ H", 1e-9, "radial", policy)])
    assert from_json(to_json(report)) == report
    path = tmp_path / "report.json"
    write_report(report, path)
    assert from_json(path.read_text(encoding="utf-8")).entries == report.entries


def test_text_rendering(policy):
    report = new_report("radial", None, [
        make_entry("flux.N", "", 1e-9, "radial", policy),
        make_entry("flux.N_phi", "", 1.0, "radial", policy),
    ])
    buf = io.StringIO()
    render_text(report, Console(file=buf, width=160, color_system=None))
    text = buf.getvalue()
    assert "PASS" in text and "FAIL" in text
    assert "1 check(s) failed" in text


def test_report_entry_lookup(policy):
    report = new_report(None, None, [make_entry("flux.N", "", 0.0, "radial", policy)])
    assert report.entry("flux.N", "radial").passed
    with pytest.raises(KeyError):
        report.entry("flux.N", "bilinear")


def test_run_config_lines():
    text = """
    # chart run
    field = radial
    center = 1.0, 0.0   # anchor
    grid = 21
    levels = 11,21,41
    tol.charts.grad_s = 1e-5
    """
    values = RunConfig.parse_lines(text)
    run = RunConfig(**values)
    assert run.center == (1.0, 0.0)
    assert run.grid == 21
    assert run.levels == [11, 21, 41]
    assert run.tolerances == {"charts.grad_s": 1e-5}
    assert RunConfig(**RunConfig.parse_lines(run.to_lines())) == run


@pytest.mark.parametrize("text", ["colour = red", "field radial", "tol.flux.N = tiny", "tolerances = 1"])
def test_run_config_rejects_bad_lines(text):
    with pytest.raises(UsageError):
        RunConfig.parse_lines(text)


def test_run_config_flags_override_file(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("field = radial\narclen = 0.25\ntol.flux.N = 1e-3\n", encoding="utf-8")
    run = RunConfig.load(path, arclen=0.75, step=None, tolerances={"flux.N_phi": 1e-2})
    assert run.field == "radial"
    assert run.arclen == 0.75
    assert run.tolerances == {"flux.N": 1e-3, "flux.N_phi": 1e-2}


@pytest.mark.parametrize("flags", [{"kind": "sideways"}, {"grid": 3}, {"step": 0.0}, {"format": "xml"}])
def test_run_config_validation(flags):
    with pytest.raises(UsageError):
        RunConfig.load(None, **flags)
