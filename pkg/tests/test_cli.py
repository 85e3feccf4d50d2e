import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from dfautomata import data_path
from dfautomata.cli import main
from dfautomata.dfa import rasterize
from dfautomata.formats import density_from_json, nda_from_json, orbit_from_json, read_density_bin, report_from_json

from conftest import GOLDEN

GRAMMAR = str(data_path("grammar_np_v_np.json"))


@pytest.fixture()
def nda_file(tmp_path):
    assert main(["compile", GRAMMAR, "--out", str(tmp_path)]) == 0
    return str(tmp_path / "nda.json")


def test_parse_matches_golden(tmp_path, capsys):
    assert main(["parse", GRAMMAR, "--input", "NP V NP", "--out", str(tmp_path)]) == 0
    golden = (GOLDEN / "parse_trace.txt").read_text(encoding="utf-8")
    assert capsys.readouterr().out == golden
    assert (tmp_path / "trace.txt").read_text(encoding="utf-8") == golden
    assert (tmp_path / "trace.jsonl").read_text(encoding="utf-8") == (GOLDEN / "parse_trace.jsonl").read_text(
        encoding="utf-8")


@pytest.mark.parametrize("text, code", [("NP V NP", 0), ("V NP", 1), ("NP V", 1), (".", 0)])
def test_parse_exit_codes(text, code):
    assert main(["parse", GRAMMAR, "--input", text]) == code


def test_parse_budget(capsys):
    assert main(["parse", GRAMMAR, "--input", "NP V NP", "--steps", "3"]) == 2
    assert main(["parse", GRAMMAR, "--input", "NP V NP", "--steps", "0"]) == 2


def test_parse_json_format(capsys):
    main(["parse", GRAMMAR, "--input", "NP V NP", "--format", "json"])
    records = [json.loads(line) for line in capsys.readouterr().out.splitlines()]
    assert [r["op"] for r in records][-1] == "accept" and len(records) == 6


def test_invalid_inputs(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"type": "cfg"}')
    assert main(["parse", str(bad), "--input", "NP"]) == 3
    assert main(["parse", str(tmp_path / "missing.json")]) == 3
    assert main(["parse", GRAMMAR, "--steps", "-1"]) == 3
    assert main(["parse", GRAMMAR, "--input", "S . . NP"]) == 3
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 3


def test_compile_requires_coding(tmp_path):
    data = json.loads(data_path("grammar_np_v_np.json").read_text())
    del data["coding"]
    path = tmp_path / "nocoding.json"
    path.write_text(json.dumps(data))
    assert main(["parse", str(path), "--input", "NP V NP"]) == 0
    assert main(["compile", str(path), "--out", str(tmp_path)]) == 3


def test_compile_outputs(nda_file, nda, capsys):
    m = nda_from_json(nda_file)
    assert m.branches == nda.branches


def test_compile_tm_has_right_move(tmp_path):
    assert main(["compile", str(data_path("tm_single_transition.json")), "--out", str(tmp_path)]) == 0
    (branch,) = nda_from_json(tmp_path / "nda.json").branches
    assert branch.label == "1,a->2,b,R"


def test_dfa_orbit_and_grid(tmp_path, nda_file):
    out = tmp_path / "run"
    assert main(["dfa", nda_file, "--input", "S . NP V NP", "--steps", "5", "--grid", "64", "--svg",
                 "--out", str(out)]) == 0
    orbit = orbit_from_json(out / "orbit.json")
    assert len(orbit) == 6 and orbit[-1].support.area == 1
    for t, r in enumerate(orbit):
        expected = rasterize(r.support, 64).cells
        assert np.array_equal(density_from_json(out / f"density_{t}.json").cells, expected)
        assert np.array_equal(read_density_bin(out / f"density_{t}.bin").cells, expected)
    for name in ("orbit.svg", "dod.svg", "doe.svg"):
        assert (out / name).read_text().startswith("<svg")


def test_dfa_zero_steps_svg(tmp_path, nda_file):
    assert main(["dfa", nda_file, "--input", "S . NP V NP", "--steps", "0", "--svg", "--out", str(tmp_path)]) == 0
    assert (tmp_path / "orbit.svg").read_text().count('fill="#000000"') == 1


def test_dfa_straddle_exit(tmp_path, nda_file, capsys):
    # an empty input block spans both attach rows after the first predict
    assert main(["dfa", nda_file, "--input", "S .", "--steps", "3", "--out", str(tmp_path)]) == 4
    assert "step 1" in capsys.readouterr().err


def test_dfa_uncoded_symbol(tmp_path, nda_file):
    assert main(["dfa", nda_file, "--input", "S . the", "--out", str(tmp_path)]) == 3


def test_grid_command(tmp_path, nda_file):
    assert main(["grid", nda_file, "--grid", "16", "--out", str(tmp_path)]) == 0
    data = json.loads((tmp_path / "operator.json").read_text())
    assert data["n"] == 16
    assert main(["grid", nda_file, "--grid", "6", "--out", str(tmp_path)]) == 3
    assert main(["grid", nda_file, "--out", str(tmp_path)]) == 3


def test_stability_command(tmp_path, capsys):
    assert main(["stability", str(data_path("bistable_field.json")), "--out", str(tmp_path)]) == 0
    report = report_from_json(tmp_path / "report.json")
    assert report.pattern == ["stable", "unstable", "stable"]
    with open(tmp_path / "trajectory_1.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["t", "u"] and abs(float(rows[-1][1]) - report[2].u0) < 1e-6
    assert (tmp_path / "plot.csv").read_text().startswith("u,gain_f_u")


def test_stability_linear_and_invalid(tmp_path, capsys):
    cfg = tmp_path / "lin.json"
    cfg.write_text(json.dumps({"domain_measure": 1, "kernel_value": 0.5, "activation": "identity"}))
    assert main(["stability", str(cfg), "--format", "json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert len(report["points"]) == 1 and report["points"][0]["stability"] == "stable"
    cfg.write_text(json.dumps({"domain_measure": 1, "kernel_value": 1, "activation": "cubic"}))
    assert main(["stability", str(cfg)]) == 3


def test_render_is_byte_deterministic(tmp_path, nda_file):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        assert main(["render", nda_file, "--input", "S . NP V NP", "--out", str(d)]) == 0
    for name in ("dod.svg", "doe.svg", "orbit.svg"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "dfautomata.cli", "parse", GRAMMAR, "--input", "V NP"],
                          capture_output=True, text=True)
    assert proc.returncode == 1 and "reject" in proc.stdout
