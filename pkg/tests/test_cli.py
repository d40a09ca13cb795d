import io
import json
import subprocess
import sys

import pytest

from realh1 import descriptor as dmod
from realh1.catalog import catalog_get, corrupted_a1xa1
from realh1.cli import main, parse_config
from realh1.orbits import h1_compute


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_compute_json(capsys):
    code, out, _ = run(capsys, "compute", "--catalog", "compact:A1", "--format", "json")
    assert code == 0
    assert json.loads(out)["orbit_count"] == 2


def test_compute_mu3(capsys):
    code, out, _ = run(capsys, "compute", "--catalog", "quasi-torus:mu3")
    assert code == 0 and json.loads(out)["orbit_count"] == 1


def test_compute_missing_file(capsys):
    code, _, err = run(capsys, "compute", "--input", "missing.json")
    assert code == 1 and "missing.json" in err


def test_compute_round_trip(capsys):
    code, out, _ = run(capsys, "compute", "--catalog", "SU(2,1)")
    assert json.loads(out) == h1_compute(catalog_get("SU(2,1)")).to_dict()


def test_compute_from_stdin(capsys, monkeypatch):
    monkeypatch.setattr(sys, "stdin", io.StringIO(dmod.dumps(catalog_get("gl2-det-square-1"))))
    code, out, _ = run(capsys, "compute", "--input", "-")
    assert code == 0 and json.loads(out)["orbit_count"] == 2


def test_compute_table(capsys):
    code, out, _ = run(capsys, "compute", "--catalog", "U(2)", "--format", "table")
    assert code == 0 and "orbit_count  3" in out


def test_compute_with_oracle(capsys):
    code, _, err = run(capsys, "compute", "--catalog", "SU(2,1)", "--oracle")
    assert code == 0 and "PASS  SU(2,1): orbit partitions agree" in err


def test_caps_exit_2(capsys):
    assert run(capsys, "compute", "--catalog", "U(3)", "--dim-cap", "2")[0] == 2
    assert run(capsys, "compute", "--catalog", "custom:B2-rotation", "--closure-cap", "2")[0] == 2


def test_unknown_entry_exit_1(capsys):
    code, _, err = run(capsys, "compute", "--catalog", "nonsense")
    assert code == 1 and "nonsense" in err


def test_exactly_one_source(capsys):
    with pytest.raises(SystemExit) as exc:
        parse_config(["compute", "--catalog", "compact:A1", "--input", "x.json"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        parse_config(["compute"])
    assert exc.value.code == 1


def test_catalog_listing(capsys):
    code, out, _ = run(capsys, "catalog")
    assert code == 0
    for entry in ["compact:A1", "compact:G2", "inner:A2:10", "gl2-det-square-1"]:
        assert entry in out
    _, out, _ = run(capsys, "catalog", "--filter", "quasi-torus")
    lines = out.splitlines()
    assert lines and all(line.startswith("quasi-torus:") for line in lines)
    _, out, _ = run(capsys, "catalog", "--format", "json")
    data = json.loads(out)
    assert isinstance(data, list) and {"entry": "compact:A1", "kind": "compact"} in data


def test_export_then_validate(capsys, tmp_path):
    _, out, _ = run(capsys, "catalog", "--export", "SU(2,1)")
    path = tmp_path / "su21.json"
    path.write_text(out, encoding="utf-8")
    code, out, _ = run(capsys, "validate", "--input", str(path))
    assert code == 0 and "FAIL" not in out and "action-relations" in out


def test_validate_sigma_involution(capsys, tmp_path):
    data = dmod.to_dict(catalog_get("quasi-torus:U1"))
    data["sigma_M"] = [[3]]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data), encoding="utf-8")
    code, out, _ = run(capsys, "validate", "--input", str(path))
    assert code == 1 and "FAIL  sigma-involution" in out


def test_validate_corrupted_delta(capsys, tmp_path):
    path = tmp_path / "corrupt.json"
    path.write_text(dmod.dumps(corrupted_a1xa1()), encoding="utf-8")
    code, out, err = run(capsys, "validate", "--input", str(path))
    assert code == 1 and "FAIL  action-relations" in out and "action-relations" in err
    code, _, _ = run(capsys, "compute", "--input", str(path))
    assert code == 1


def test_validate_json_format(capsys):
    code, out, _ = run(capsys, "validate", "--catalog", "custom:SL2C", "--format", "json")
    checks = json.loads(out)
    assert code == 0 and checks[-1]["check"] == "action-relations" and checks[-1]["ok"]


def test_torus(capsys):
    code, out, _ = run(capsys, "torus", "--catalog", "quasi-torus:U1xmu4", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["dim_h1_q"] == 2 and len(data["basis_lifts"]) == 2
    code, out, _ = run(capsys, "torus", "--catalog", "gl2-det-square-1")
    assert code == 0 and "dim H^1(R, Q)     1" in out


def test_oracle_check(capsys):
    code, out, _ = run(capsys, "oracle-check", "--catalog", "U(3)")
    assert code == 0 and out.count("PASS") == 2
    code, out, _ = run(capsys, "oracle-check", "--catalog", "compact:E8")
    assert code == 0 and out.count("SKIP") == 2


def test_threads_do_not_change_output(capsys):
    run(capsys, "compute", "--all", "--threads", "1")
    code1, out1, _ = run(capsys, "compute", "--all", "--threads", "1")
    code4, out4, _ = run(capsys, "compute", "--all", "--threads", "4")
    assert code1 == code4 == 0 and out1 == out4


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "realh1", "compute", "--catalog", "SL2R"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and json.loads(proc.stdout)["orbit_count"] == 1
