import json

import pytest

from ermakov_stefan.cli import main
from ermakov_stefan.output import read_csv
from ermakov_stefan.specialfn import airy


def test_airy_rows(capsys):
    assert main(["airy", "0", "1.5", "-9"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "z,ai,aip,bi,bip,wronskian_defect"
    assert len(lines) == 4
    row = [float(v) for v in lines[2].split(",")]
    v = airy(1.5)
    assert row[1:5] == [v.ai, v.aip, v.bi, v.bip]
    assert row[5] < 1e-14


def test_airy_needs_arguments():
    with pytest.raises(SystemExit) as exc:
        main(["airy"])
    assert exc.value.code == 2


def test_solve_golden(repo_root, tmp_path):
    out = tmp_path / "run"
    assert main(["solve", "--config", str(repo_root / "configs/default.json"), "--out", str(out)]) == 0
    for name in ("problem.json", "residuals.json"):
        assert (out / name).read_bytes() == (repo_root / "tests/golden" / name).read_bytes()
    data = read_csv(out / "solution.csv")
    assert len(data["u"]) == 2500
    assert max(abs(data["residual"])) < 1e-9


def test_solve_is_deterministic(repo_root, tmp_path):
    args = ["solve", "--config", str(repo_root / "configs/default.json"), "--emit", "csv,json,svg"]
    assert main(args + ["--out", str(tmp_path / "a")]) == 0
    assert main(args + ["--out", str(tmp_path / "b")]) == 0
    for f in (tmp_path / "a").iterdir():
        assert f.read_bytes() == (tmp_path / "b" / f.name).read_bytes()
    assert (tmp_path / "a" / "profile.svg").read_text().startswith("<svg")


def test_negative_lambda_rejected(tmp_path, capsys):
    assert main(["solve", "--lambda", "-1", "--out", str(tmp_path)]) == 2
    assert "lambda" in capsys.readouterr().err


def test_tolerance_breach_exit_code(tmp_path, capsys):
    assert main(["solve", "--tol", "1e-30", "--out", str(tmp_path)]) == 1
    assert "tolerance breached: pde analytic" in capsys.readouterr().err


def test_pm_route(tmp_path, capsys):
    assert main(["inverse", "--pm", "2.0"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["P_m"] == pytest.approx(2.0, abs=1e-10)
    assert main(["solve", "--pm", "2.0", "--out", str(tmp_path)]) == 0
    prob = json.loads((tmp_path / "problem.json").read_text())
    assert prob["gamma"] == pytest.approx(doc["gamma"], abs=1e-12)


def test_gamma_and_pm_exclusive():
    with pytest.raises(SystemExit):
        main(["solve", "--gamma", "1", "--pm", "2"])


def test_inverse_needs_target(capsys):
    assert main(["inverse"]) == 2


def test_reciprocal_and_plot(tmp_path):
    out = tmp_path / "r"
    assert main(["reciprocal", "--out", str(out), "--emit", "csv,json"]) == 0
    doc = json.loads((out / "reciprocal.json").read_text())
    assert doc["path_independence"]["difference"] < 1e-8
    assert main(["plot", str(out / "front.csv"), "--kind", "front"]) == 0
    assert (out / "front.svg").read_text().startswith("<svg")


def test_modulate(tmp_path):
    out = tmp_path / "m"
    assert main(["modulate", "--out", str(out)]) == 0
    doc = json.loads((out / "involution.json").read_text())
    assert doc["round_trip_error"] < 1e-10
    assert doc["ablation_residual"]["max_rel"] > 1e-2


def test_plot_heatmap(tmp_path):
    assert main(["solve", "--out", str(tmp_path)]) == 0
    assert main(["plot", str(tmp_path / "solution.csv"), "--kind", "heatmap", "--out", str(tmp_path / "h.svg")]) == 0
    assert main(["plot", str(tmp_path / "solution.csv"), "--kind", "front"]) == 2
    assert main(["plot", str(tmp_path / "missing.csv")]) == 2
