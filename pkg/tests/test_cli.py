"""Configuration parsing and the command-line pipelines."""

import json
import os

import numpy as np
import pytest

import fuzzfrac as ff
from fuzzfrac.cli import main
from fuzzfrac.config import ProblemConfig, load_config
from fuzzfrac.errors import ConfigParseError


def write_config(tmp_path, raw, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(raw), encoding="utf-8")
    return str(path)


def example_dict():
    return {
        "data": [
            {"x": 0.0, "u": [2, 2, 2]},
            {"x": 0.25, "u": [3, 1, 1]},
            {"x": 0.5, "u": [5, 3, 3]},
            {"x": 0.75, "u": [4, 2, 2]},
            {"x": 1.0, "u": [5, 1, 1]},
        ],
        "address": [[0, 2], [1, 4], [0, 2], [1, 3]],
        "alphas": [0.3, 0.33, 0.65, 0.5],
    }


# ---------------------------------------------------------------------------
# config parsing


def test_bundled_example_loads():
    cfg = ff.example_config()
    assert len(cfg.points) == 5
    assert cfg.alphas == (0.3, 0.33, 0.65, 0.5)
    assert cfg.address_pairs == ((0, 2), (1, 4), (0, 2), (1, 3))
    spec = cfg.build()
    assert spec.n == 4


def test_missing_field_names_location():
    raw = example_dict()
    del raw["alphas"]
    with pytest.raises(ConfigParseError, match="alphas"):
        ProblemConfig.from_dict(raw)


def test_bad_ordinate_names_entry():
    raw = example_dict()
    raw["data"][2]["u"] = [5, 3]
    with pytest.raises(ConfigParseError, match=r"data\[2\]\.u"):
        ProblemConfig.from_dict(raw)


def test_bad_address_entry():
    raw = example_dict()
    raw["address"][1] = [1, "x"]
    with pytest.raises(ConfigParseError, match=r"address\[1\]"):
        ProblemConfig.from_dict(raw)


def test_unknown_field_rejected():
    raw = example_dict()
    raw["alpha"] = [0.1]
    with pytest.raises(ConfigParseError, match="alpha"):
        ProblemConfig.from_dict(raw)


def test_breakpoint_ordinates(tmp_path):
    raw = example_dict()
    raw["data"][0]["u"] = {"breakpoints": [[0, 0, 4], [1, 2, 2]]}
    cfg = ProblemConfig.from_dict(raw)
    u = cfg.points[0][1]
    assert ff.level(u, 0) == ff.Interval(0, 4)
    assert ff.level(u, 1) == ff.Interval(2, 2)


def test_invalid_json_reports_line(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"data": [,]}', encoding="utf-8")
    with pytest.raises(ConfigParseError, match="line 1"):
        load_config(str(path))


def test_missing_file(tmp_path):
    with pytest.raises(ConfigParseError):
        load_config(str(tmp_path / "nope.json"))


def test_override_resamples_levels():
    cfg = ff.example_config().override(lambda_grid_size=16)
    assert cfg.points[0][1].levels.size == 17
    spec = cfg.build()
    assert spec.levels.size == 17


# ---------------------------------------------------------------------------
# CLI commands


def test_validate_example(capsys):
    assert main(["validate"]) == 0
    out = capsys.readouterr().out
    assert "L = 6, 16.04, 18.6, 8" in out
    assert "theta_max = 0.0537634" in out
    assert "validation passed" in out


def test_validate_rejects_short_address_span(tmp_path, capsys):
    raw = example_dict()
    raw["address"][0] = [0, 1]
    code = main(["validate", "--config", write_config(tmp_path, raw)])
    assert code == 1
    assert "at least two subintervals" in capsys.readouterr().out


def test_validate_reducible_matrix(tmp_path, capsys):
    raw = {
        "data": [
            {"x": 0.0, "u": [0, 1, 1]},
            {"x": 1.0, "u": [0, 1, 1]},
            {"x": 2.0, "u": [0, 1, 1]},
            {"x": 3.0, "u": [0, 1, 1]},
            {"x": 4.0, "u": [0, 1, 1]},
        ],
        "address": [[0, 2], [0, 2], [2, 4], [2, 4]],
        "alphas": [0, 0, 0, 0],
    }
    code = main(["validate", "--config", write_config(tmp_path, raw)])
    out = capsys.readouterr().out
    assert code == 1
    assert "irreducible" in out
    assert "unreachable interval indices" in out


def test_validate_inadmissible_alphas(tmp_path, capsys):
    raw = example_dict()
    raw["alphas"] = [0.3, 0.33, 0.65, 0.9]
    code = main(["validate", "--config", write_config(tmp_path, raw)])
    out = capsys.readouterr().out
    assert code == 1
    assert "(a1)" in out


def test_solve_outputs_and_determinism(tmp_path, capsys):
    out1 = str(tmp_path / "a")
    out2 = str(tmp_path / "b")
    assert main(["solve", "--out", out1, "--grid-density", "16"]) == 0
    assert main(["solve", "--out", out2, "--grid-density", "16"]) == 0
    csv1 = open(os.path.join(out1, "solution.csv"), "rb").read()
    csv2 = open(os.path.join(out2, "solution.csv"), "rb").read()
    assert csv1 == csv2
    rep1 = open(os.path.join(out1, "iteration_report.txt"), "rb").read()
    rep2 = open(os.path.join(out2, "iteration_report.txt"), "rb").read()
    assert rep1 == rep2
    assert b"\r" not in csv1

    header, *rows = csv1.decode().strip().split("\n")
    assert header == "x,f_minus(0.5),f_plus(0.5),f_minus(0.75),f_plus(0.75),f_minus(1),f_plus(1)"
    # node rows carry the data: core column equals the center at each node
    table = {float(r.split(",")[0]): [float(v) for v in r.split(",")[1:]] for r in rows}
    centers = {0.0: 2, 0.25: 3, 0.5: 5, 0.75: 4, 1.0: 5}
    for x, c in centers.items():
        vals = table[x]
        assert vals[4] == pytest.approx(c, abs=1e-8)  # f_minus(1)
        assert vals[5] == pytest.approx(c, abs=1e-8)  # f_plus(1)


def test_solve_csv_nesting_roundtrip(tmp_path):
    out = str(tmp_path / "o")
    assert main(["solve", "--out", out, "--grid-density", "8"]) == 0
    rows = open(os.path.join(out, "solution.csv")).read().strip().split("\n")[1:]
    data = np.array([[float(v) for v in r.split(",")] for r in rows])
    lo05, hi05, lo75, hi75, lo1, hi1 = (data[:, k] for k in range(1, 7))
    assert np.all(lo05 <= lo75) and np.all(lo75 <= lo1)
    assert np.all(lo1 <= hi1) and np.all(hi1 <= hi75) and np.all(hi75 <= hi05)


def test_zero_alpha_config_one_iteration(tmp_path):
    raw = example_dict()
    raw["alphas"] = [0, 0, 0, 0]
    out = str(tmp_path / "z")
    assert main(["solve", "--config", write_config(tmp_path, raw), "--out", out]) == 0
    rep = open(os.path.join(out, "iteration_report.txt")).read()
    assert "iterations: 1" in rep


def test_plot_outputs(tmp_path):
    out = str(tmp_path / "p")
    assert main(["plot", "--out", out, "--grid-density", "16"]) == 0
    svg = open(os.path.join(out, "level_sets.svg")).read()
    assert svg.startswith("<svg")
    assert svg.count("<polyline") >= 6  # lower+upper per level
    assert "#d62728" in svg and "#2ca02c" in svg and "#1f77b4" in svg
    band = open(os.path.join(out, "graph_band.svg")).read()
    assert "<polygon" in band
    # determinism
    out2 = str(tmp_path / "p2")
    assert main(["plot", "--out", out2, "--grid-density", "16"]) == 0
    assert open(os.path.join(out2, "level_sets.svg")).read() == svg


def test_analyze_reports_exponent(capsys):
    assert main(["analyze", "--grid-density", "16"]) == 0
    out = capsys.readouterr().out
    assert "tau: 0.0365" in out
    assert "delta: 1.95" in out
    assert "analysis passed" in out


def test_perturb_writes_report(tmp_path, capsys):
    out = str(tmp_path / "s")
    code = main(
        [
            "perturb", "--kind", "perturb_u", "--size", "0.01",
            "--out", out, "--grid-density", "16",
        ]
    )
    assert code == 0
    body = open(os.path.join(out, "stability_report.csv")).read()
    header, row = body.strip().split("\n")
    assert header == "kind,size,theoretical_bound,observed_D,margin"
    fields = row.split(",")
    assert fields[0] == "perturb_u"
    assert float(fields[4]) >= 0


def test_perturb_deterministic(tmp_path):
    args = ["perturb", "--kind", "perturb_u", "--size", "0.01", "--grid-density", "16"]
    o1, o2 = str(tmp_path / "d1"), str(tmp_path / "d2")
    assert main(args + ["--out", o1]) == 0
    assert main(args + ["--out", o2]) == 0
    r1 = open(os.path.join(o1, "stability_report.csv"), "rb").read()
    r2 = open(os.path.join(o2, "stability_report.csv"), "rb").read()
    assert r1 == r2


def test_perturb_inadmissible_exit_code(tmp_path, capsys):
    # the boundary-tight scaling factor cannot move upward
    code = main(
        [
            "perturb", "--kind", "perturb_alpha", "--size", "0.1",
            "--seed", "0", "--out", str(tmp_path / "i"), "--grid-density", "16",
        ]
    )
    assert code == 1
    assert "error:" in capsys.readouterr().err


def test_config_parse_error_exit_code(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{", encoding="utf-8")
    assert main(["validate", "--config", str(path)]) == 2
    assert "config error" in capsys.readouterr().err


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as info:
        main(["perturb"])  # missing required --kind/--size
    assert info.value.code == 2
