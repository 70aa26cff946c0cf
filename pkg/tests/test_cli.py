import json

import pytest

from holonomy_lab import cli
from holonomy_lab.report_io import validate_report


def _run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_algebra_verify(capsys):
    code, out, _ = _run(capsys, "algebra", "verify")
    rep = json.loads(out)
    validate_report(rep)
    assert code == 0 and rep["pass"]


@pytest.mark.parametrize("action", ["volume", "selfdual", "inner"])
def test_geometry(capsys, action):
    code, out, _ = _run(capsys, "geometry", action)
    rep = json.loads(out)
    assert code == 0 and rep["pass"] and rep["quantity"] == action


def test_geometry_fails_with_impossible_tolerance(capsys):
    code, _, _ = _run(capsys, "geometry", "volume", "--grid", "16", "--tol", "1e-30")
    assert code == 1


def test_field_dump_rows_and_columns(tmp_path):
    out = tmp_path / "f.csv"
    assert cli.main(["field", "dump", "--system", "su3-deg", "--level", "E1", "--grid", "16", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 16 ** 4 + 1
    header = lines[0].split(",")
    assert header[:4] == ["beta", "alpha", "gamma", "theta"]
    assert "F12_11_re" in header and "F34_22_im" in header
    assert len(header) == 4 + 6 * 4 * 2


def test_field_dump_connection(capsys):
    code, out, _ = _run(capsys, "field", "dump", "--system", "su2", "--j", "1", "--level", "1",
                        "--component", "A", "--grid", "4")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 17 and lines[0].startswith("theta,phi,A1_11_re")


def test_chern_single_level(capsys):
    code, out, _ = _run(capsys, "chern", "--system", "su3-deg", "--level", "E1", "--grid", "64", "--grid4", "12")
    rep = json.loads(out)
    validate_report(rep)
    assert code == 0 and rep["c1"]["nearest"] == -1 and rep["c2"]["nearest"] == 1
    assert rep["extras"]["action_over_c2"] == pytest.approx(1.0, abs=1e-8)


def test_chern_monopole_negative_level(capsys):
    code, out, _ = _run(capsys, "chern", "--system", "su2", "--j", "3/2", "--level=-3/2")
    assert code == 0 and json.loads(out)["c1"]["nearest"] == 3


def test_holonomy_from_loop_file(tmp_path, capsys):
    loop = tmp_path / "loop.json"
    loop.write_text(json.dumps({"manifold": "S2", "kind": "latitude", "theta0": 1.0}))
    code, out, _ = _run(capsys, "holonomy", "--system", "su2", "--level", "1/2", "--loop", str(loop))
    rep = json.loads(out)
    validate_report(rep)
    assert code == 0 and rep["converged"]


def test_simulate(tmp_path, capsys):
    loop = tmp_path / "loop.json"
    loop.write_text(json.dumps({"manifold": "S2", "kind": "latitude", "theta0": 1.0}))
    code, out, _ = _run(capsys, "simulate", "--system", "su2", "--level", "1/2", "--loop", str(loop),
                        "--T", "20")
    rep = json.loads(out)
    validate_report(rep)
    assert code in (0, 1) and rep["pass"] == (code == 0)
    assert rep["steps"] >= 1e5


def test_verify_suite_to_file(tmp_path):
    out = tmp_path / "v.json"
    assert cli.main(["verify", "--suite", "algebra", "decomposition", "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    validate_report(rep)
    assert rep["pass"] and all(c["provenance"] in ("PAPER", "DERIVED", "TRIVIAL") for c in rep["checks"])


def test_output_is_deterministic(capsys):
    args = ["geometry", "selfdual", "--seed", "7"]
    _, a, _ = _run(capsys, *args)
    _, b, _ = _run(capsys, *args)
    strip = lambda s: {k: v for k, v in json.loads(s).items() if k != "wall_time"}
    assert strip(a) == strip(b)


def test_toml_config_with_flag_override(tmp_path, capsys):
    cfg = tmp_path / "run.toml"
    cfg.write_text('grid = 16\ntol = 1e-30\n')
    code, out, _ = _run(capsys, "geometry", "volume", "--config", str(cfg))
    assert code == 1 and json.loads(out)["config"]["grid"] == 16
    code, _, _ = _run(capsys, "geometry", "volume", "--config", str(cfg), "--tol", "1e-3")
    assert code == 0


@pytest.mark.parametrize("argv", [
    [],
    ["nonsense"],
    ["chern"],
    ["chern", "--system", "su3-deg", "--level", "E7"],
    ["chern", "--system", "su5", "--level", "E1"],
    ["geometry", "volume", "--tol", "-1"],
    ["geometry", "volume", "--step", "1"],
    ["geometry", "volume", "--threads", "0"],
    ["geometry", "volume", "--grid", "2"],
    ["field", "dump", "--system", "su3-flag", "--level", "1"],
    ["holonomy", "--system", "su2", "--level", "1/2", "--loop", "/nonexistent.json"],
    ["verify", "--suite", "bogus"],
])
def test_usage_errors_exit_two(argv, capsys):
    assert cli.main(argv) == 2


def test_unknown_config_key(tmp_path, capsys):
    cfg = tmp_path / "bad.toml"
    cfg.write_text("colour = 'blue'\n")
    assert cli.main(["algebra", "verify", "--config", str(cfg)]) == 2


def test_open_loop_is_usage_error(tmp_path, capsys):
    loop = tmp_path / "open.json"
    loop.write_text(json.dumps({"manifold": "CP2", "samples": [[1, 0.5, 1, 1.5], [1.2, 0.5, 1, 1.5]]}))
    assert cli.main(["holonomy", "--system", "su3-deg", "--level", "E1", "--loop", str(loop)]) == 2


def test_version_flag(capsys):
    assert cli.main(["--version"]) == 0
