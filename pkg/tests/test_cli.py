import csv
import json
import math

import pytest

from kitaev_ladder.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_spectrum_two_leg(capsys):
    code, out, err = run(capsys, "spectrum", "--lattice", "two-leg", "-N", "2", "-J", "1", "-K", "1")
    assert code == 0
    rows = list(csv.DictReader(out.splitlines()))
    assert sum(int(r["degeneracy"]) for r in rows) == 64
    assert (rows[0]["energy"], rows[0]["degeneracy"]) == ("-6", "2")
    assert (rows[-1]["energy"], rows[-1]["degeneracy"]) == ("6", "2")
    assert "ground -6 x2" in err


def test_spectrum_three_leg_total(capsys, tmp_path):
    out_file = tmp_path / "s.csv"
    code, out, _ = run(capsys, "spectrum", "--lattice", "three-leg", "-N", "2", "-o", str(out_file))
    assert code == 0 and "states=1024" in out
    rows = list(csv.DictReader(out_file.read_text().splitlines()))
    assert sum(int(r["degeneracy"]) for r in rows) == 1024


def test_spectrum_budget_exit_2(capsys):
    code, _, err = run(capsys, "spectrum", "--lattice", "square-torus", "-N", "5")
    assert code == 2 and "error" in err


def test_degenerate_size_exit_2(capsys):
    assert run(capsys, "spectrum", "-N", "1")[0] == 2


def test_thermo_rows(capsys):
    code, out, _ = run(capsys, "thermo", "-N", "10", "--beta", "0", "1")
    assert code == 0
    rows = list(csv.DictReader(out.splitlines()))
    assert float(rows[0]["entropy_density"]) == pytest.approx(3 * math.log(2), rel=1e-15)
    r = rows[1]
    assert float(r["entropy_density"]) == pytest.approx(
        float(r["entropy_vertex"]) + float(r["entropy_plaquette"]), abs=1e-12)


def test_thermo_grid_and_json(capsys):
    code, out, _ = run(capsys, "thermo", "-N", "10", "20", "--beta-min", "0.1", "--beta-max", "1",
                       "--steps", "4", "--format", "json")
    assert code == 0 and len(json.loads(out)) == 8


def test_thermo_requires_grid(capsys):
    assert run(capsys, "thermo", "-N", "4")[0] == 2
    assert run(capsys, "thermo", "-N", "4", "--beta", "-1")[0] == 2


def test_thermo_is_byte_identical(tmp_path, capsys):
    paths = [tmp_path / f"t{i}.csv" for i in range(2)]
    for p in paths:
        main(["thermo", "-N", "10", "40", "--beta-min", "0", "--beta-max", "2", "--steps", "7", "-o", str(p)])
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_rdm_A(capsys):
    code, out, _ = run(capsys, "rdm", "--sub", "A", "-N", "2", "--beta", "1")
    rep = json.loads(out)
    assert code == 0 and rep["trace_distance_to_maximally_mixed"] <= 1e-10


def test_rdm_B(capsys):
    code, out, _ = run(capsys, "rdm", "--sub", "B", "-N", "2", "--beta", "0.9", "--units", "nats")
    rep = json.loads(out)
    assert code == 0 and rep["closed_vs_brute_force_trace_distance"] <= 1e-10
    assert rep["entropy_bits"] == pytest.approx(rep["entropy_bits_closed_form"], abs=1e-12)
    assert "entropy_nats" in rep


def test_rdm_D(capsys):
    code, out, _ = run(capsys, "rdm", "--sub", "D", "-N", "2", "--beta", "2")
    rep = json.loads(out)
    assert code == 0 and rep["eigenvalues"] == pytest.approx([0.25] * 4)


def test_rdm_C_and_errors(capsys):
    code, out, _ = run(capsys, "rdm", "--sub", "C", "-N", "3", "--rungs", "0", "2", "--beta", "1.1")
    assert code == 0 and json.loads(out)["closed_vs_brute_force_trace_distance"] <= 1e-10
    assert run(capsys, "rdm", "--sub", "C", "-N", "3", "--rungs", "0", "1", "2", "--beta", "1")[0] == 2
    assert run(capsys, "rdm", "--sub", "A", "-N", "20", "--beta", "1")[0] == 2
    assert run(capsys, "rdm", "--sub", "A", "--lattice", "three-leg", "--beta", "1")[0] == 2


def test_verify_skip_torus(capsys, tmp_path):
    report = tmp_path / "r.json"
    code, out, _ = run(capsys, "verify", "--skip", "torus", "-o", str(report))
    assert code == 0
    assert "[SKIP] criterion  6 residuals_torus" in out
    data = json.loads(report.read_text())
    torus = [c for c in data["checks"] if c["name"] == "residuals_torus"][0]
    assert torus["status"] == "SKIP" and data["passed"]


def test_verify_injected_k_sign_fails(capsys):
    code, out, err = run(capsys, "verify", "--skip", "torus", "--inject", "k-sign")
    assert code == 1
    assert "[FAIL] criterion  1 spectrum_two_leg" in out
    assert "spectrum_two_leg" in err
