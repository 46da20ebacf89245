import json
from importlib import resources

import jsonschema
import numpy as np
import pytest

from tmspec.cli import cli_dispatch

SCHEMA = json.loads(resources.files("tmspec").joinpath("data/output.schema.json").read_text())


def run(argv, capsys):
    code = cli_dispatch(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(argv, capsys):
    code, out, err = run(argv, capsys)
    assert code == 0, err
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMA)
    return doc


def test_constants(capsys, constants):
    doc = run_json(["constants"], capsys)
    assert doc["data"]["mu0"] == constants.mu0
    assert doc["meta"]["mu"] is None and doc["meta"]["regime"] is None
    assert doc["meta"]["discrepancy_notes"]


def test_zeros(capsys):
    doc = run_json(["zeros", "--mu", "1.88"], capsys)
    assert doc["meta"]["regime"] == "RealLineZeros"
    assert doc["data"]["s0"] == pytest.approx(0.6233928697395131, rel=1e-12)
    assert doc["data"]["z_plus"]["im"] == 0.5
    doc = run_json(["zeros", "--mu", "1.5"], capsys)
    assert doc["data"] == {"zeros_in_strip": False}


def test_mass_by_m(capsys):
    doc = run_json(["zeros", "--m", "0.05"], capsys)
    assert doc["meta"]["mu"] == pytest.approx(2 / 1.05)
    assert doc["meta"]["m"] == 0.05


def test_ladder(capsys):
    doc = run_json(["ladder", "--m", "0.05", "--beta", "0,1", "--n-min", "-3", "--n-max", "5", "--eps", "1"],
                   capsys)
    rows = doc["data"]
    assert [r["n"] for r in rows] == list(range(-3, 6))
    lam = np.array([r["lambda_n"] for r in rows])
    assert np.allclose(lam[1:] / lam[:-1], doc["meta"]["ladder"]["ratio"], rtol=1e-12)
    assert doc["meta"]["ladder"]["eta"] == pytest.approx(np.pi)
    for r in rows:
        lo, hi = r["bracket"]
        assert lo < r["lambda_n"] < hi
        assert r["h_level"] == pytest.approx(-(r["lambda_n"]) ** -2)


def test_ladder_negative_beta_and_csv(capsys):
    code, out, _ = run(["ladder", "--mu", "1.88", "--beta=-1,0", "--format", "csv"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "n,lambda_n,bracket_lo,bracket_hi,h_level"
    assert len(lines) == 8


def test_detect(capsys):
    doc = run_json(["detect", "--mu", "1.88", "--beta-angle", "1.0", "--n-min", "-1", "--n-max", "1"], capsys)
    assert doc["meta"]["detector"]["max_rel_error"] < 1e-6
    assert all(r["rel_error"] < 1e-6 for r in doc["data"])


def test_hlevels(capsys):
    doc = run_json(["hlevels", "--mu", "1.88", "--beta", "1,0", "--eps", "0.5"], capsys)
    e = np.array([r["h_level"] for r in doc["data"]])
    assert np.allclose(e[1:] / e[:-1], doc["meta"]["energy_ratio"], rtol=1e-12)
    code, _, _ = run(["hlevels", "--mu", "1.88", "--beta", "1,0"], capsys)
    assert code == 2


def test_eigenfunction(capsys):
    doc = run_json(["eigenfunction", "--mu", "1.88", "--lambda", "0,1", "--points", "11"], capsys)
    assert len(doc["data"]) == 11
    assert max(r["equation_residual"] for r in doc["data"]) < 1e-7


def test_curve_json_and_csv(tmp_path, capsys, constants):
    doc = run_json(["curve", "--mu-min", "1.8", "--mu-max", "1.9", "--points", "21"], capsys)
    assert doc["meta"]["crossings"]["mu1"] == pytest.approx(constants.mu1, abs=1e-8)
    out = tmp_path / "c.csv"
    code, _, _ = run(["curve", "--mu-min", "1.8", "--mu-max", "1.9", "--points", "21", "--format", "csv",
                      "--out", str(out)], capsys)
    assert code == 0 and out.read_text().startswith("mu,sqrt_term,q0,q1\n")
    assert (tmp_path / "c.csv.crossings.json").exists()


def test_verify_selected_checks(capsys):
    doc = run_json(["verify", "--mu-list", "1.5,1.86,1.88", "--check", "zero_residuals",
                    "--check", "critical_ordering"], capsys)
    assert doc["meta"]["overall"] is True
    assert {c["name"] for c in doc["data"]["checks"]} == {"zero_residuals", "critical_ordering"}


def test_verify_failure_exit_code(capsys):
    # the one-term tail fit misses its 5% tolerance at m = 0.05
    code, out, _ = run(["verify", "--m", "0.05", "--check", "a_tail_fit"], capsys)
    doc = json.loads(out)
    assert code == 1 and doc["meta"]["overall"] is False


def test_output_is_byte_stable(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        assert cli_dispatch(["ladder", "--mu", "1.88", "--beta", "0,1", "--out", str(p)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_config_file_merges(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"mu": 1.88, "beta": "0,1", "n_min": 0, "n_max": 1, "tol_abs": 1e-11}))
    doc = run_json(["ladder", "--config", str(cfg), "--n-max", "2"], capsys)
    assert [r["n"] for r in doc["data"]] == [0, 1, 2]
    assert doc["meta"]["tolerances"]["abs_tol"] == 1e-11


@pytest.mark.parametrize("argv", [
    [],
    ["nosuch"],
    ["zeros"],
    ["zeros", "--mu", "1.9", "--m", "0.1"],
    ["zeros", "--mu", "2.5"],
    ["ladder", "--mu", "1.88"],
    ["ladder", "--mu", "1.88", "--beta", "0,0"],
    ["ladder", "--mu", "1.88", "--beta", "0,1", "--n-min", "3", "--n-max", "1"],
    ["constants", "--tol-abs", "-1"],
    ["curve", "--mu-min", "1.9", "--mu-max", "1.8"],
    ["eigenfunction", "--mu", "1.88", "--lambda", "2,0"],
    ["verify", "--check", "no_such_check", "--mu-list", "1.5"],
])
def test_usage_errors(argv, capsys):
    code, _, err = run(argv, capsys)
    assert code == 2 and err


def test_bad_config_file(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"colour": "red"}))
    assert run(["constants", "--config", str(cfg)], capsys)[0] == 2
    assert run(["constants", "--config", str(tmp_path / "missing.json")], capsys)[0] == 2


def test_numeric_failure_exit_code(capsys):
    # the ladder needs zeros on the midline
    code, _, err = run(["ladder", "--mu", "1.86", "--beta", "0,1"], capsys)
    assert code == 1 and "regime" in err
