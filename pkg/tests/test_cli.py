import io
import json

import pytest

from kasteleyn.cli import CSV_HEADER, main


def run(argv):
    out = io.StringIO()
    code = main(argv, out)
    return code, out.getvalue()


def test_kernel_ekl():
    code, text = run(["kernel", "ekl", "--a", "0.5", "--k", "3", "--ell", "5"])
    assert code == 0
    assert float(text) == pytest.approx(-0.003295840081685483, rel=1e-13)


def test_kernel_ekl_parity_and_determinism():
    assert run(["kernel", "ekl", "--a", "0.5", "--k", "1", "--ell", "2"]) == (0, "0\n")
    argv = ["kernel", "ctilde", "--a", "0.5", "--phic", "0.05", "--k", "-1", "--ell", "3"]
    first = run(argv)
    assert first == run(argv)
    assert float(first[1]) == pytest.approx(-0.022677302172883745, rel=1e-13)


def test_kernel_vertex_pairs_json():
    code, text = run(["kernel", "k11", "--a", "0.5", "--x", "1,0", "--y", "4,3",
                      "--format", "json"])
    assert code == 0
    doc = json.loads(text)
    assert doc["kernel"] == "k11"


def test_invalid_parameters_exit_2(capsys):
    assert run(["kernel", "ekl", "--a", "1.5", "--k", "3", "--ell", "5"])[0] == 2
    assert run(["kernel", "ctilde", "--a", "0.5", "--k", "1", "--ell", "3"])[0] == 2
    assert run(["kernel", "k11", "--x", "2,1", "--y", "4,3"])[0] == 2
    assert run(["corr", "--xi", "-0.2", "--phic", "0.1"])[0] == 2
    assert "error" in capsys.readouterr().err


def test_convergence_failure_exit_3():
    code, _ = run(["kernel", "ekl", "--a", "0.5", "--k", "41", "--ell", "41",
                   "--nodes", "64", "--max-nodes", "64"])
    assert code == 3


def test_sweep_csv():
    code, text = run(["sweep", "--a", "0.5", "--phic", "0.02", "--rmin", "2", "--rmax", "6",
                      "--rstep", "2"])
    assert code == 0
    lines = text.strip().splitlines()
    assert lines[0] == CSV_HEADER
    assert len(lines) == 4
    r, r1, r2, exact, asym, regime, gate = lines[1].split(",")
    assert (float(r), int(r1), int(r2)) == (2.0, 2, 2)
    assert float(exact) < 0 and regime in ("I", "II", "III") and gate == "ok"


def test_corr_json_and_config(tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"a": 0.5, "phic": 0.02, "dir": "anti", "rmin": 100,
                               "rmax": 100, "format": "json"}))
    code, text = run(["corr", "--config", str(cfg)])
    assert code == 0
    rows = json.loads(text)
    assert len(rows) == 1 and rows[0]["r2"] == -100 and rows[0]["corr_exact"] > 0
    # flags override the config
    code, text = run(["corr", "--config", str(cfg), "--format", "csv"])
    assert text.startswith(CSV_HEADER)


def test_config_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"colour": "red"}))
    assert run(["corr", "--config", str(bad)])[0] == 2
    assert run(["corr", "--config", str(tmp_path / "missing.json")])[0] == 2


def test_oracle_partition_function():
    code, text = run(["oracle", "--a", "1.0", "--n", "4"])
    assert code == 0
    assert "1024" in text


def test_verify_command():
    code, text = run(["verify"])
    doc = json.loads(text)
    assert code == 0 and doc["passed"]
