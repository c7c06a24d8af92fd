import json
import logging

import pytest

from charflow import __version__
from charflow.cli.main import EXIT_IO, EXIT_OK, EXIT_USAGE, main
from charflow.modules.tracer.services.curve import read_curve_csv


@pytest.fixture(autouse=True)
def reset_cli_logging():
    yield
    logger = logging.getLogger("charflow")
    for handler in logger.handlers[:]:
        logger.removeHandler(handler)
    logger.propagate = True


def test_version(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert capsys.readouterr().out.strip() == f"charflow {__version__}"


def test_catalog_list_json(capsys):
    assert main(["catalog", "list"]) == EXIT_OK
    rows = json.loads(capsys.readouterr().out)
    assert [r["name"] for r in rows] == ["bilinear", "radial", "example32", "lipschitz_xy"]
    assert set(rows[0]) == {"name", "mode", "description", "validity", "characteristics", "seeds", "smooth"}
    assert rows[2]["smooth"] is False


def test_catalog_show_text(capsys):
    assert main(["catalog", "show", "radial", "--format", "text"]) == EXIT_OK
    assert "radial" in capsys.readouterr().out


def test_catalog_show_needs_a_name():
    assert main(["catalog", "show"]) == EXIT_USAGE


@pytest.mark.parametrize("argv", [
    ["trace", "--field", "radial"],
    ["trace", "--field", "nope", "--start=1,0"],
    ["trace", "--start=1,0"],
    ["trace", "--field", "radial", "--start", "1;0"],
    ["flux", "--field", "radial", "--tol", "flux.N"],
    ["verify"],
    ["verify", "flux", "--field", "bilinear", "--grid", "4"],
    ["flux", "--field", "bilinear", "--phi", "x +"],
    ["minimize", "--H", "1 +", "--start", "0,1", "--end", "1,1"],
    ["minimize", "--H", "1", "--start", "0,-1", "--end", "1,1", "--nodes", "20"],
])
def test_usage_errors(argv):
    assert main(argv) == EXIT_USAGE


def test_broken_field_file_is_a_usage_error(tmp_path):
    field = tmp_path / "broken.txt"
    field.write_text("u = x*\nF1 = -y\nF2 = x\n", encoding="utf-8")
    assert main(["trace", "--field", str(field), "--start=1,0"]) == EXIT_USAGE


def test_argparse_rejects_bad_choices():
    with pytest.raises(SystemExit) as exc:
        main(["trace", "--kind", "sideways"])
    assert exc.value.code == 2


def test_trace_writes_csv(tmp_path):
    out = tmp_path / "circle.csv"
    code = main(["trace", "--field", "radial", "--start=1,0", "--arclen", "0.1", "--step", "0.01",
                 "--out", str(out)])
    assert code == EXIT_OK
    text = out.read_text(encoding="utf-8")
    assert text.splitlines()[0] == "sigma,x,y,theta,H,kappa"
    curve = read_curve_csv(out)
    assert curve.sigma[-1] == pytest.approx(0.1)
    assert curve.x[-1] ** 2 + curve.y[-1] ** 2 == pytest.approx(1.0, abs=1e-8)


def test_trace_reads_a_config_file(tmp_path):
    config = tmp_path / "run.cfg"
    config.write_text("field = bilinear\nstart = 1, 0.5\narclen = 0.25\n", encoding="utf-8")
    out = tmp_path / "line.csv"
    assert main(["trace", "--config", str(config), "--out", str(out)]) == EXIT_OK
    curve = read_curve_csv(out)
    assert curve.x[-1] == pytest.approx(1.25, abs=1e-10)
    assert curve.y[-1] == pytest.approx(0.5, abs=1e-10)


def test_missing_config_file_is_an_io_error(tmp_path):
    assert main(["trace", "--config", str(tmp_path / "missing.cfg")]) == EXIT_IO


def test_minimize_constant_H(tmp_path):
    out = tmp_path / "arc.csv"
    report = tmp_path / "report.json"
    code = main(["minimize", "--H", "1", "--start", "0,1", "--end", "1,1", "--nodes", "50",
                 "--out", str(out), "--report", str(report)])
    assert code == EXIT_OK
    data = json.loads(report.read_text(encoding="utf-8"))
    assert data["entries"][0]["check"] == "variational.euler_lagrange"
    assert data["entries"][0]["passed"]
    assert data["metadata"]["run_config"]["nodes"] == 50
    assert len(read_curve_csv(out)) == 51


def test_flux_on_bilinear(tmp_path):
    out = tmp_path / "flux.json"
    assert main(["flux", "--field", "bilinear", "--out", str(out)]) == EXIT_OK
    data = json.loads(out.read_text(encoding="utf-8"))
    assert all(e["passed"] for e in data["entries"])
    assert data["metadata"]["run_config"]["field"] == "bilinear"


def test_verify_list(capsys):
    assert main(["verify", "--list"]) == EXIT_OK
    out = capsys.readouterr().out
    for suite in ("theorem-a", "funnel", "charts", "theta-t", "flux"):
        assert suite in out


def test_verify_exit_code_follows_the_report(tmp_path):
    out = tmp_path / "verify.json"
    code = main(["verify", "flux", "--field", "bilinear", "--out", str(out)])
    data = json.loads(out.read_text(encoding="utf-8"))
    passed = all(e["passed"] or not e["judged"] for e in data["entries"])
    assert code == (EXIT_OK if passed else 1)
    assert {e["check"] for e in data["entries"]} >= {"flux.N", "flux.DNperp"}


@pytest.mark.slow
def test_verify_all_is_reproducible(tmp_path):
    out = tmp_path / "verify.json"
    dumps = []
    for _ in range(2):
        main(["verify", "all", "--field", "radial", "--out", str(out)])
        data = json.loads(out.read_text(encoding="utf-8"))
        assert data["metadata"].pop("timestamp", None) is not None
        dumps.append(json.dumps(data, sort_keys=True))
    assert dumps[0] == dumps[1]
