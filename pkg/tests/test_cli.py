import json

import pytest

from sigmalab.cli import RunConfig, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_invariants_square(capsys):
    code, out, _ = run(capsys, "invariants", "--lattice", "1", "0", "0", "1")
    assert code == 0
    doc = json.loads(out)
    rec = doc["results"][0]
    assert abs(rec["mu"]["re"]) < 1e-12 and abs(rec["mu"]["im"]) < 1e-12
    assert doc["schema_version"]
    assert {"S", "nu", "eta1", "eta2", "g2", "g3", "G4", "G12", "legendre_residual"} <= rec.keys()


def test_invariants_hexagonal_g2(capsys):
    code, out, _ = run(capsys, "invariants", "--lattice", "1", "0", "0.5", "0.866025403784")
    g2 = json.loads(out)["results"][0]["g2"]
    assert code == 0 and abs(g2["re"]) < 1e-9 and abs(g2["im"]) < 1e-9


def test_invariants_needs_lattice(capsys):
    code, _, err = run(capsys, "invariants")
    assert code == 2 and "usage" in err


def test_bad_lattice(capsys):
    code, _, err = run(capsys, "invariants", "--lattice", "1", "0", "2", "0")
    assert code == 2 and "lattice" in err


def test_bad_flag_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["audit", "--quad-order", "x"])
    assert exc.value.code == 2


def test_invalid_config_value(capsys):
    code, _, _ = run(capsys, "coeffs", "--preset", "square", "--quad-order", "1")
    assert code == 2


def test_coeffs_rows(capsys):
    code, out, _ = run(capsys, "coeffs", "--preset", "square", "--rmax", "2")
    rows = json.loads(out)["results"]
    assert code == 0
    r0, r1, r2 = rows
    for key in ("W_recursion", "W_series", "W_integral"):
        assert r0[key]["re"] == pytest.approx(1.0)
        assert abs(r1[key]["re"]) < 1e-10
    g2 = 189.0727201292
    for key in ("W_recursion", "W_series", "W_integral"):
        assert r2[key]["re"] == pytest.approx(-g2 / 2, rel=1e-9)


def test_table_csv(capsys):
    code, out, _ = run(capsys, "table", "--rmax", "3")
    assert code == 0
    assert out.splitlines() == ["m,n,numerator,denominator", "0,0,1,1", "1,0,-1,1", "0,1,-3,1"]
    _, out, _ = run(capsys, "table")
    assert "1,1,-18,1" in out.splitlines() and "3,0,69,1" in out.splitlines()


def test_audit_csv_one_row_per_report(capsys, panel_audit):
    code, out, _ = run(capsys, "audit", "--format", "csv")
    assert code == 0
    lines = out.rstrip("\r\n").split("\r\n")
    assert len(lines) == len(panel_audit) + 1
    assert lines[0].startswith("identity_id,lattice_label,verdict")


def test_audit_tiny_shells_exit_1(capsys):
    code, _, _ = run(capsys, "audit", "--preset", "generic", "--max-shell", "2")
    assert code == 1


def test_io_error(capsys, tmp_path):
    code, _, err = run(capsys, "table", "--out", str(tmp_path / "missing" / "t.csv"))
    assert code == 3


def test_out_file_and_lattice_file(capsys, tmp_path):
    lat = tmp_path / "lat.json"
    lat.write_text(json.dumps({"omega1": [1, 0], "omega2": [0.3, 1.2]}))
    out = tmp_path / "inv.txt"
    code, stdout, _ = run(capsys, "invariants", "--lattice-file", str(lat), "--format", "text", "--out", str(out))
    assert code == 0 and stdout == ""
    assert "legendre_residual" in out.read_text()


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig(max_shell=0)
    with pytest.raises(ValueError):
        RunConfig(r_max=-1)
    with pytest.raises(ValueError):
        RunConfig(lattice=(1, 0, 0, 1), preset="square")
    assert [label for label, _ in RunConfig().lattices()] == ["square", "hexagonal", "generic", "generic_scaled"]
