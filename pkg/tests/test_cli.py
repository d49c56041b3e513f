"""End-to-end tests of the command line interface: output shapes,
documented examples, reproducibility, and exit codes."""

import json

import numpy as np
import pytest

from nilharm import cli


def _run(capsys, argv):
    rc = cli.main(argv)
    captured = capsys.readouterr()
    return rc, captured.out


def test_classify_degenerate_example(capsys):
    rc, out = _run(capsys, ["classify", "--case", "II", "--n", "1", "--lambda", "random"])
    assert rc == 0
    doc = json.loads(out)
    assert doc["verdict"] == "Degenerate"
    assert doc["kernel_dim"] >= 1
    assert doc["pfaffian_numeric"] == 0.0


def test_classify_square_integrable(capsys):
    rc, out = _run(capsys, ["classify", "--case", "VII", "--n", "2", "--lambda", "1.5"])
    assert rc == 0
    doc = json.loads(out)
    assert doc["verdict"] == "SquareIntegrable"
    assert doc["kernel_dim"] == 0


def test_pfaffian_heisenberg_example(capsys):
    rc, out = _run(capsys, ["pfaffian", "--case", "VII", "--n", "3", "--lambda", "2"])
    assert rc == 0
    doc = json.loads(out)
    assert abs(doc["pfaffian_numeric"] - 8.0) < 1e-9
    assert abs(doc["pfaffian_weights"] - 8.0) < 1e-9
    assert doc["rel_deviation"] < 1e-12


def test_spherical_zero_of_angular_factor(capsys):
    # at |z| = pi and lam = 1 the sphere average sin(pi)/pi vanishes
    rc, out = _run(capsys, [
        "spherical", "--case", "I", "--n", "1", "--j", "0",
        "--lambda", "1", "--z-norm", "3.14159265358979", "--points", "3",
    ])
    assert rc == 0
    lines = [ln for ln in out.splitlines() if ln and not ln.startswith("#")]
    assert lines[0].split(",")[:4] == ["case", "lambda", "index", "point"]
    for row in lines[1:]:
        fields = row.split(",")
        assert abs(float(fields[4])) < 1e-10
    assert len(lines) == 4


def test_build_reports_dimensions(capsys):
    rc, out = _run(capsys, ["build", "--case", "IX", "--n", "3"])
    assert rc == 0
    doc = json.loads(out)
    assert doc["dim_g"] == 9
    assert doc["dim_gp"] == 8
    assert doc["dim_c"] == 1
    assert doc["dim_v"] == 6
    pi = np.array([[[c["re"] if isinstance(c, dict) else c for c in row] for row in mat]
                   for mat in doc["pi"]])
    assert pi.shape == (9, 6, 6)
    res = doc["structure_residuals"]
    assert all(v < 1e-10 for v in res.values())


def test_density_csv_structure(capsys):
    rc, out = _run(capsys, [
        "density", "--case", "VII", "--n", "2", "--lambda", "1.5", "--points", "5",
    ])
    assert rc == 0
    lines = out.splitlines()
    assert lines[0].startswith("#")
    data = [ln for ln in lines if ln and not ln.startswith("#")]
    header = data[0].split(",")
    assert header == ["s", "z1", "theta", "pfaffian", "density"]
    assert len(data) == 6
    for row in data[1:]:
        s, z1, theta, pf, dens = (float(t) for t in row.split(","))
        assert theta == 1.0
        assert abs(pf - (1.5 * s) ** 2) < 1e-12
        assert abs(dens - pf) < 1e-12


def test_invert_heisenberg_reduced(capsys):
    rc, out = _run(capsys, [
        "invert", "--case", "VII", "--n", "1", "--j", "10", "--grid", "48",
    ])
    assert rc == 0
    doc = json.loads(out)
    assert doc["target"] == "heisenberg"
    assert max(doc["per_point_error"]) < 1e-5
    assert abs(doc["fitted_c"] - doc["classical_c"]) < 1e-4 * doc["classical_c"]
    assert doc["truncation"]["J"] == 10
    assert doc["passed"] is True


def test_invert_caseI_reduced(capsys):
    rc, out = _run(capsys, [
        "invert", "--case", "I", "--n", "1", "--j", "12", "--grid", "16",
        "--mc-samples", "800", "--seed", "3",
    ])
    assert rc == 0
    doc = json.loads(out)
    assert doc["target"] == "case-I-identity"
    assert doc["consistent"] is True
    assert doc["spread"] <= 3.0 * doc["combined_sigma"]


def test_byte_reproducibility_with_mc(capsys):
    argv = [
        "spherical", "--case", "IX", "--n", "3", "--lambda", "1.2",
        "--index", "1,0,1", "--points", "3", "--mc-samples", "2000", "--seed", "11",
    ]
    rc1, out1 = _run(capsys, argv)
    rc2, out2 = _run(capsys, argv)
    assert rc1 == rc2 == 0
    assert out1 == out2
    assert "stderr" in out1.splitlines()[2]


def test_out_flag_writes_file(tmp_path, capsys):
    target = tmp_path / "verdict.json"
    rc, out = _run(capsys, [
        "classify", "--case", "V", "--n", "3", "--lambda", "random",
        "--seed", "4", "--out", str(target),
    ])
    assert rc == 0
    assert f"wrote {target}" in out
    doc = json.loads(target.read_text())
    assert doc["verdict"] == "SquareIntegrable"


def test_bad_arguments_exit_2(capsys):
    assert cli.main(["classify", "--case", "Q", "--lambda", "1"]) == 2
    capsys.readouterr()
    assert cli.main(["density", "--case", "VII", "--n", "1",
                     "--H", "1.0", "--Z", "1.0"]) == 2
    capsys.readouterr()
    assert cli.main(["invert", "--case", "V", "--n", "3"]) == 2
    capsys.readouterr()
    assert cli.main(["classify", "--case", "VII", "--n", "1",
                     "--lambda", "random", "--Z", "2.0"]) == 2
    capsys.readouterr()


def test_missing_subcommand_exits_2():
    with pytest.raises(SystemExit) as exc:
        cli.main([])
    assert exc.value.code == 2


def test_budget_cap_exits_2(monkeypatch, capsys):
    monkeypatch.setenv("NILHARM_BUDGET", "1000")
    rc = cli.main(["invert", "--case", "VII", "--n", "1", "--j", "10", "--grid", "48"])
    capsys.readouterr()
    assert rc == 2


def test_selftest_passes(capsys):
    rc, out = _run(capsys, ["selftest", "--seed", "0"])
    assert rc == 0
    lines = [ln for ln in out.splitlines() if ln.strip()]
    assert lines[-1] == "8/8 checks passed"
    assert all(ln.startswith("PASS") for ln in lines[:-1])
