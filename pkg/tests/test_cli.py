import csv
import io
import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from photon_trk.cli import fmt, main

EXAMPLES = Path(__file__).resolve().parents[1] / "src" / "photon_trk" / "examples"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_fmt():
    assert fmt(1.0) == "1"
    assert fmt(-0.0) == "0"
    assert fmt(1 / 3) == "0.333333333333"
    assert fmt(1.23456789012345e-20) == "1.23456789012e-20"


def test_report_harmonic_partial_sum(capsys):
    code, out, _ = run(capsys, "report", EXAMPLES / "harmonic.model")
    assert code == 0
    table = rows(out)
    assert list(table[0]) == ["k", "omega_k", "abs_Q_ik_sq", "abs_P_ik_sq", "F_ik", "partial_sum", "quad_residual"]
    assert len(table) == 10
    assert abs(float(table[-1]["partial_sum"]) - 1.0) <= 1e-9


def test_report_rabi_deep_strong_dominated_by_k3(capsys):
    code, out, _ = run(capsys, "report", EXAMPLES / "rabi_eta1p8.model")
    assert code == 0
    f = [float(r["F_ik"]) for r in rows(out)]
    assert int(np.argmax(f)) == 3 and f[3] > 0.8


def test_report_json(capsys):
    code, out, _ = run(capsys, "report", EXAMPLES / "two_resonator_qubit.model", "--format", "json", "--mode", "b",
                       "--levels", "5", "--ref", "1")
    assert code == 0
    doc = json.loads(out)
    assert doc["mode"] == "b" and doc["reference_state"] == 1 and len(doc["rows"]) == 5
    assert doc["total"] == pytest.approx(1.0, abs=1e-8)


def test_missing_file_exit_2_no_output(capsys, tmp_path):
    target = tmp_path / "out.csv"
    code, out, err = run(capsys, "report", tmp_path / "absent.model", "--out", target)
    assert code == 2
    assert not target.exists()
    assert "absent.model" in err


def test_invalid_model_exit_2(capsys, tmp_path):
    bad = tmp_path / "bad.model"
    bad.write_text("[model]\nkind = rabi\n[truncation]\nn_fock = 4\n")
    target = tmp_path / "out.csv"
    code, _, err = run(capsys, "spectrum", bad, "--out", target)
    assert code == 2 and not target.exists()
    assert "line 2" in err


def test_bad_flags_exit_2(capsys):
    code, _, err = run(capsys, "report", EXAMPLES / "kerr_resonator.model", "--mode", "zz")
    assert code == 2 and "zz" in err
    code, _, _ = run(capsys, "report", EXAMPLES / "kerr_resonator.model", "--ref", "50")
    assert code == 2
    code, _, _ = run(capsys, "sweep", EXAMPLES / "kerr_resonator.model")
    assert code == 2
    code, _, _ = run(capsys, "transmission", EXAMPLES / "rabi_sweep.model")
    assert code == 2
    code, _, _ = run(capsys, "transmission", EXAMPLES / "harmonic.model", "--alpha", "-1")
    assert code == 2
    with pytest.raises(SystemExit) as info:
        main(["report", str(EXAMPLES / "kerr_resonator.model"), "--levels", "0"])
    assert info.value.code == 2


def test_numerical_failure_exit_3(capsys, monkeypatch):
    from photon_trk import cli
    from photon_trk.linalg import ConvergenceError

    def boom(*_a, **_k):
        raise ConvergenceError("did not converge", 1.0)

    monkeypatch.setattr(cli, "diagonalize_model", boom)
    code, _, err = run(capsys, "spectrum", EXAMPLES / "kerr_resonator.model")
    assert code == 3 and "numerical failure" in err


def test_jc_sweep_constant_q(capsys):
    code, out, _ = run(capsys, "sweep", EXAMPLES / "jc_sweep.model")
    assert code == 0
    table = rows(out)
    assert list(table[0])[:2] == ["eta", "omega[0]"]
    assert len(table) == 21
    for r in table:
        assert abs(float(r["abs_Q_10_sq"]) - 0.25) <= 1e-10


def test_rabi_sweep_columns_coincide(capsys):
    code, out, _ = run(capsys, "sweep", EXAMPLES / "rabi_sweep.model", "--jobs", "2")
    assert code == 0
    for r in rows(out):
        assert abs(float(r["scaled_Q_10_sq"]) - float(r["abs_P_10_sq"])) <= 1e-8


def test_converter_sweep_minimum(capsys):
    code, out, _ = run(capsys, "sweep", EXAMPLES / "converter_sweep.model")
    assert code == 0
    table = rows(out)
    assert len(table[0]) == 1 + 6 + 4
    gap = [float(r["omega[4]"]) - float(r["omega[3]"]) for r in table]
    assert abs(float(table[int(np.argmin(gap))]["omega_0"]) - 1.056) <= 0.005


def test_sweep_order_independent_of_jobs(capsys, monkeypatch):
    _, serial, _ = run(capsys, "sweep", EXAMPLES / "nonlinear_sweep.model", "--jobs", "1")
    monkeypatch.setenv("SUMRULE_JOBS", "3")
    _, parallel, _ = run(capsys, "sweep", EXAMPLES / "nonlinear_sweep.model")
    assert serial == parallel


def test_transmission_harmonic_peak(capsys, tmp_path):
    target = tmp_path / "t.csv"
    code, _, _ = run(capsys, "transmission", EXAMPLES / "harmonic.model", "--out", target)
    assert code == 0
    table = rows(target.read_text())
    t = np.array([float(r["T"]) for r in table])
    w = np.array([float(r["omega"]) for r in table])
    assert w[np.argmax(t)] == pytest.approx(1.0)
    assert abs(t.max() - 1.0) <= 1e-9
    lines = rows((tmp_path / "t_lines.csv").read_text())
    assert list(lines[0]) == ["k", "omega_k0", "Gamma_k0", "Gamma_k", "weight_analytic", "weight_numeric"]


def test_transmission_oracle_column(capsys, tmp_path):
    target, lines = tmp_path / "t.csv", tmp_path / "lines.csv"
    code, _, _ = run(capsys, "transmission", EXAMPLES / "nonlinear_resonator.model", "--oracle", "--out", target,
                     "--lines-out", lines)
    assert code == 0
    table = rows(target.read_text())
    assert list(table[0]) == ["omega", "T", "T_oracle"]
    assert max(abs(float(r["T"]) - float(r["T_oracle"])) for r in table) <= 1e-10
    for r in rows(lines.read_text()):
        ratio = float(r["weight_numeric"]) / float(r["weight_analytic"])
        assert 0.9 <= ratio <= 1.1


def test_spectrum_and_determinism(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["spectrum", str(EXAMPLES / "rabi_coulomb.model"), "--out", str(a), "--levels", "5"]) == 0
    assert main(["spectrum", str(EXAMPLES / "rabi_coulomb.model"), "--out", str(b), "--levels", "5"]) == 0
    data = a.read_bytes()
    assert data == b.read_bytes()
    assert b"\r" not in data and data.count(b"\n") == 6


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "photon_trk", "spectrum", str(EXAMPLES / "kerr_resonator.model"), "--levels", "3"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout == "k,omega_k\n0,0\n1,1\n2,2.2\n"
