import json

import numpy as np
import pytest

from ergocert.cli import EXIT_INPUT, EXIT_NUMERICAL, EXIT_OK, EXIT_ORACLE, main
from ergocert.io import canonical, read_state, read_table, write_state
from ergocert.states import noisy_ghz


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text, fmt="csv"):
    return read_table(text, fmt)


def test_certify_bell(capsys):
    code, out, _ = run_cli(capsys, "certify", "--system", "NAFP", "--family", "bell-diag",
                           "--beta", "1.2566", "--gamma", "0.9425")
    assert code == EXIT_OK
    r = rows(out)[0]
    assert abs(float(r["delta"]) - 0.338) < 1e-3 and r["units"] == "omega_P"
    assert r["verdict_g"] == "entangled" and r["verdict_i"] == "inconclusive"


def test_certify_werner_zero(capsys):
    code, out, _ = run_cli(capsys, "certify", "--system", "BRTP", "--family", "werner",
                           "--lambda", "0", "--format", "json")
    r = json.loads(out)[0]
    assert code == 0
    assert {r["verdict_gl"], r["verdict_g"], r["verdict_i"]} == {"inconclusive"}


def test_certify_matrix_file(capsys, tmp_path):
    p = tmp_path / "ghz.txt"
    write_state(p, noisy_ghz(0.6, 3))
    code, out, _ = run_cli(capsys, "certify", "--system", "FAN", "--matrix", str(p),
                           "--partition", "1")
    assert code == 0 and rows(out)[0]["verdict_g"] == "entangled"


def test_certify_bad_matrix(capsys, tmp_path):
    p = tmp_path / "bad.txt"
    p.write_text("qubits 1\n1 0\n0 1\n")
    code, _, err = run_cli(capsys, "certify", "--system", "NAFP", "--matrix", str(p))
    assert code == EXIT_INPUT and "trace" in err
    code, _, err = run_cli(capsys, "certify", "--system", "NAFP", "--matrix", str(tmp_path / "no"))
    assert code == EXIT_INPUT


@pytest.mark.parametrize("argv", [
    ["certify", "--system", "NAFP", "--family", "werner"],
    ["certify", "--system", "NAFP", "--family", "bell-diag", "--beta", "1", "--gamma", "1",
     "--partition", "1,2"],
    ["certify", "--system", "FAN", "--family", "bell-diag", "--beta", "1", "--gamma", "1"],
    ["certify", "--system", "NOPE", "--family", "werner", "--lambda", "0.5"],
    ["sweep", "--family", "werner", "--resolution", "1"],
    ["threshold", "--system", "NAFP", "--family", "bell-diag"],
])
def test_input_errors(capsys, argv):
    assert run_cli(capsys, *argv)[0] == EXIT_INPUT


def test_threshold_without_crossing_is_numerical(capsys, tmp_path):
    # a register with zero gaps stores no energy, so nothing is ever certified
    cfg = tmp_path / "s.cfg"
    cfg.write_text("flat = 0, 0\n")
    code, _, err = run_cli(capsys, "threshold", "--system", "flat", "--config", str(cfg),
                           "--family", "werner", "--bound", "g")
    assert code == EXIT_NUMERICAL and "never" in err


def test_threshold_records(capsys):
    code, out, _ = run_cli(capsys, "threshold", "--system", "FAN", "--family", "ghz")
    assert code == 0
    got = {r["bound"]: r for r in rows(out)}
    assert abs(float(got["g"]["threshold"]) - 3 / 7) < 1e-6
    assert abs(float(got["gl"]["difference"])) < 1e-6
    assert got["i"]["closed_form"] == ""


def test_threshold_dbfm_gl(capsys):
    code, out, _ = run_cli(capsys, "threshold", "--system", "DBFM", "--family", "ghz",
                           "--partition", "1,2", "--bound", "gl")
    assert code == 0 and abs(float(rows(out)[0]["threshold"]) - 0.2) < 1e-3


def test_sweep_werner(capsys):
    code, out, _ = run_cli(capsys, "sweep", "--system", "BRTP", "--family", "werner",
                           "--resolution", "101")
    assert code == 0
    table = rows(out)
    lam = np.array([float(r["lambda"]) for r in table])
    d = np.array([float(r["delta"]) for r in table])
    g = np.array([float(r["bound_g"]) for r in table])
    assert np.allclose(np.diff(d, 2), 0, atol=1e-12)
    cross = lam[np.argmax(d > g + 1e-9)]
    assert abs(cross - 0.34) < 1e-9


def test_sweep_bell_grid_shape(capsys):
    code, out, _ = run_cli(capsys, "sweep", "--family", "bell-diag", "--resolution", "11")
    table = rows(out)
    assert code == 0 and len(table) == 121
    assert list(table[0])[:3] == ["beta", "gamma", "delta"]
    assert float(table[1]["gamma"]) > 0 and float(table[1]["beta"]) == 0


def test_sweep_ghz_zero_row(capsys):
    code, out, _ = run_cli(capsys, "sweep", "--system", "FAN", "--family", "ghz",
                           "--resolution", "5")
    r = rows(out)[0]
    assert float(r["lambda"]) == 0 and float(r["delta"]) < 0
    assert {r["verdict_gl"], r["verdict_g"], r["verdict_i"]} == {"inconclusive"}


def test_sweep_csv_json_agree(capsys):
    argv = ["sweep", "--family", "bell-diag", "--resolution", "4"]
    _, a, _ = run_cli(capsys, *argv)
    _, b, _ = run_cli(capsys, *argv, "--format", "json")
    assert canonical(rows(a)) == canonical(rows(b, "json"))


def test_sweep_workers_keep_order(capsys, tmp_path):
    one, two = tmp_path / "1.csv", tmp_path / "2.csv"
    base = ["sweep", "--family", "bell-diag", "--resolution", "6"]
    assert run_cli(capsys, *base, "--out", str(one))[0] == 0
    assert run_cli(capsys, *base, "--out", str(two), "--workers", "2")[0] == 0
    assert one.read_bytes() == two.read_bytes()


def test_simulate_ghz(capsys):
    code, out, _ = run_cli(capsys, "simulate", "ghz", "--n", "3", "--theta", "0")
    assert code == 0
    got = {r["step"]: r for r in rows(out)}
    assert float(got["prepared"]["fidelity"]) > 1 - 1e-10


def test_simulate_bell_reaches_ground(capsys):
    code, out, _ = run_cli(capsys, "simulate", "bell-diag", "--beta", "0", "--gamma", "0")
    final = rows(out)[-1]
    assert code == 0 and abs(float(final["energy"]) - float(final["ground_energy"])) < 1e-9


def test_simulate_exp3(capsys, tmp_path):
    dump = tmp_path / "final.txt"
    code, out, _ = run_cli(capsys, "simulate", "exp3", "--lambda", "0.5", "--units", "MHz",
                           "--dump", str(dump))
    assert code == 0
    from ergocert.hamiltonians import OMEGA_C, OMEGA_F, OMEGA_H
    want = 0.5 / 8 * 4 * (OMEGA_H + OMEGA_C + OMEGA_F)
    final = rows(out)[-1]
    assert abs(float(final["energy"]) - want) < 1e-9
    assert read_state(dump).qubit_count == 3


def test_simulate_program_file(capsys, tmp_path):
    p = tmp_path / "prog.txt"
    p.write_text("H 1\nCNOT 1 2\nLABEL bell\n")
    code, out, _ = run_cli(capsys, "simulate", "--program", str(p), "--system", "NAFP")
    assert code == 0 and [r["step"] for r in rows(out)] == ["bell", "final"]
    p.write_text("H 1\nCNOT 1 2\nSWAP 1 2\n")
    code, _, err = run_cli(capsys, "simulate", "--program", str(p))
    assert code == EXIT_INPUT and "line 3" in err


def test_oracle_small_run_passes(capsys, tmp_path):
    out = tmp_path / "o.csv"
    code, _, err = run_cli(capsys, "oracle", "--count", "20", "--resolution", "11",
                           "--out", str(out))
    assert code == 0
    table = rows(out.read_text())
    assert all(r["failures"] == "0" for r in table)
    assert {r["suite"] for r in table} == {"separable", "passive", "propositions", "npt"}
    assert "FAIL" not in err


def test_oracle_failure_exit_code(capsys, monkeypatch):
    import ergocert.cli as cli
    monkeypatch.setattr(cli, "_suite_npt", lambda res: [
        {"suite": "npt", "case": "forced", "checked": 1, "failures": 1, "worst_slack": 1.0}])
    code, _, err = run_cli(capsys, "oracle", "--count", "5", "--resolution", "3")
    assert code == EXIT_ORACLE and "FAIL" in err


def test_oracle_is_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        run_cli(capsys, "oracle", "--count", "10", "--resolution", "5", "--seed", "99",
                "--format", "json", "--out", str(p))
    assert a.read_bytes() == b.read_bytes()
