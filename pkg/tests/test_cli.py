import csv
import io

import pytest

from cvqkd.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_keyrate_default(capsys):
    code, out, _ = run(capsys, "keyrate")
    assert code == 0
    (row,) = rows(out)
    assert float(row["loss_db"]) == 5.0 and row["status"] == "ok"


def test_sweep_byte_stable(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("sweep.start_db = 4\nsweep.stop_db = 8\nsweep.step_db = 0.5\n")
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["sweep", "--config", str(cfg), "--out", str(a)]) == 0
    assert main(["sweep", "--config", str(cfg), "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert len(rows(a.read_text())) == 9


def test_raw_flag_keeps_negative(capsys):
    _, out, _ = run(capsys, "keyrate", "--loss-db", "14", "--raw")
    assert float(rows(out)[0]["r_collective"]) < 0
    _, out, _ = run(capsys, "keyrate", "--loss-db", "14")
    assert float(rows(out)[0]["r_collective"]) == 0.0


def test_aborted_rows_exit_zero(tmp_path, capsys):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("security.coherent.f_et = 0\n")
    code, out, _ = run(capsys, "keyrate", "--config", str(cfg), "--mode", "coherent")
    assert code == 0 and rows(out)[0]["status"] == "infeasible"


def test_config_errors_exit_nonzero(tmp_path, capsys):
    bad = tmp_path / "bad.cfg"
    bad.write_text("hardware.typo = 1\n")
    assert run(capsys, "sweep", "--config", str(bad))[0] == 2
    assert run(capsys, "sweep", "--config", str(tmp_path / "missing.cfg"))[0] == 2
    assert run(capsys, "keyrate", "--out", str(tmp_path / "no" / "dir.csv"))[0] == 2


def test_noise_budget(capsys):
    code, out, _ = run(capsys, "noise-budget", "--loss-db", "5")
    assert code == 0
    names = [r["component"] for r in rows(out)]
    assert names[-1] == "total" and "xi_cmrr" in names


def test_optimize(capsys):
    code, out, _ = run(capsys, "optimize-va", "--loss-db", "5")
    assert code == 0
    assert 1.0 < float(rows(out)[0]["v_a_opt"]) < 20.0


def test_optimize_infeasible(tmp_path, capsys):
    cfg = tmp_path / "b.cfg"
    cfg.write_text("security.collective.beta = 0\n")
    assert run(capsys, "optimize-va", "--config", str(cfg))[0] == 1


def test_estimate_seeded(capsys):
    _, a, _ = run(capsys, "estimate", "--trials", "20", "--n-pe", "500", "--seed", "4")
    _, b, _ = run(capsys, "estimate", "--trials", "20", "--n-pe", "500", "--seed", "4")
    _, c, _ = run(capsys, "estimate", "--trials", "20", "--n-pe", "500", "--seed", "5")
    assert a == b and a != c
    assert list(rows(a)[0]) == ["trial", "t_hat", "xi_hat", "covered_t", "covered_xi"]


def test_defaults_round_trip(tmp_path, capsys):
    _, text, _ = run(capsys, "defaults")
    cfg = tmp_path / "d.cfg"
    cfg.write_text(text)
    _, again, _ = run(capsys, "defaults", "--config", str(cfg))
    assert again == text
