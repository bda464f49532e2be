import csv
import io
import math
import subprocess
import sys

import pytest

from toronto_ilhi.cli import main
from toronto_ilhi.special import marcum_q
from toronto_ilhi.toronto import decreasing_in_n_certified


def run(argv):
    out = io.StringIO()
    code = main(argv, out=out)
    return code, out.getvalue()


def rows_by_method(text):
    table = {}
    for row in csv.DictReader(io.StringIO(text)):
        table.setdefault(float(row["sweep_var"]), {})[row["method"]] = float(row["value"])
    return table


def test_eval_closed_matches_identity():
    code, out = run(["eval", "toronto", "--m", "2", "--n", "0.5", "--r", "1", "--B", "1", "--method", "closed"])
    assert code == 0
    value, tag = out.split()
    assert tag == "closed-form"
    assert float(value) == pytest.approx(1 - marcum_q(1.5, math.sqrt(2), math.sqrt(2)), rel=1e-12)


def test_eval_zero_B():
    code, out = run(["eval", "toronto", "--m", "2", "--n", "0.5", "--r", "1", "--B", "0"])
    assert code == 0
    assert float(out.split()[0]) == 0.0


def test_eval_domain_error(capsys):
    code, _ = run(["eval", "ilhi", "--m", "1", "--n", "0.4", "--a", "2", "--z", "1", "--method", "closed"])
    assert code == 2
    assert "closed form requires n + 1/2 ∈ ℕ" in capsys.readouterr().err


def test_eval_oracle_reports_error_estimate():
    code, out = run(["eval", "ilhi", "--m", "1", "--n", "0.4", "--a", "2", "--z", "1", "--method", "oracle"])
    assert code == 0
    assert "oracle +/-" in out


def test_eval_auto_falls_back(capsys):
    code, out = run(["eval", "toronto", "--m", "1", "--n", "0.4", "--r", "1", "--B", "2"])
    assert code == 0 and out.split()[1] == "oracle"
    assert "oracle" in capsys.readouterr().err


def test_eval_missing_flag():
    code, _ = run(["eval", "toronto", "--m", "2", "--n", "0.5", "--r", "1"])
    assert code == 2


FIG1 = ["sweep", "toronto", "--m", "1", "--B", "2", "--var", "r", "--start", "0.1", "--stop", "5",
        "--step", "0.1", "--method", "closed@0.5,oracle@0.4,oracle@0.6"]


def test_sweep_orders_bounds_where_certified():
    code, out = run(FIG1)
    assert code == 0
    assert out.splitlines()[0] == "sweep_var,method,value"
    table = rows_by_method(out)
    assert len(table) == 50
    checked = 0
    for r, vals in table.items():
        lo, half, hi = vals["oracle(n=0.6)"], vals["closed(n=0.5)"], vals["oracle(n=0.4)"]
        if decreasing_in_n_certified(r, 0.4):
            assert lo <= half <= hi
            checked += 1
    assert checked >= 9


def test_sweep_order_reverses_for_large_r():
    _, out = run(FIG1)
    vals = rows_by_method(out)[5.0]
    assert vals["oracle(n=0.4)"] < vals["closed(n=0.5)"] < vals["oracle(n=0.6)"]


def test_sweep_ilhi_bracket():
    code, out = run(["sweep", "ilhi", "--m", "2", "--a", "2", "--var", "z", "--start", "0.5", "--stop", "10",
                     "--step", "0.5", "--method", "closed@1.5,oracle@1.3,closed@0.5"])
    assert code == 0
    for vals in rows_by_method(out).values():
        assert vals["closed(n=1.5)"] <= vals["oracle(n=1.3)"] <= vals["closed(n=0.5)"]


def test_sweep_rows_sorted():
    _, out = run(FIG1)
    keys = [(float(r["sweep_var"]), r["method"]) for r in csv.DictReader(io.StringIO(out))]
    assert keys == sorted(keys)


def test_sweep_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(FIG1 + ["--out", str(a)])[0] == 0
    assert run(FIG1 + ["--out", str(b)])[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_sweep_empty_range():
    code, out = run(["sweep", "toronto", "--m", "1", "--n", "0.5", "--B", "2", "--var", "r",
                     "--start", "1", "--stop", "1", "--step", "0.1", "--method", "closed"])
    assert code == 2 and out == ""


def test_sweep_no_partial_output():
    # the first grid point (a = 0.5) leaves the closed-form domain; nothing may be written
    code, out = run(["sweep", "ilhi", "--m", "2", "--n", "0.5", "--z", "1", "--var", "a",
                     "--start", "0.5", "--stop", "2", "--step", "0.5", "--method", "closed"])
    assert code == 2 and out == ""


def test_sweep_plot(tmp_path):
    pytest.importorskip("matplotlib")
    png = tmp_path / "fig.png"
    code, _ = run(FIG1[:-2] + ["--method", "closed@0.5,oracle@0.6", "--plot", str(png)])
    assert code == 0
    assert png.stat().st_size > 1000


def test_verify_default_grid(tmp_path):
    report = tmp_path / "report.csv"
    code, out = run(["verify", "--out", str(report)])
    assert code == 0
    assert "verification passed" in out
    closed = next(r for r in csv.DictReader(report.open()) if r["check"] == "toronto closed vs oracle")
    assert float(closed["worst"]) <= 1e-8


def test_verify_impossible_tolerance():
    code, out = run(["verify", "--rel-tol", "1e-30"])
    assert code == 1
    assert "worst offender" in out


def test_verify_tolerance_from_env(monkeypatch):
    monkeypatch.setenv("TORONTO_ILHI_TOL", "1e-30")
    assert run(["verify", "--m", "2", "--n", "0.5", "--r", "1", "--B", "1"])[0] == 1
    monkeypatch.setenv("TORONTO_ILHI_TOL", "1e-6")
    assert run(["verify", "--m", "2", "--n", "0.5", "--r", "1", "--B", "1"])[0] == 0


def test_verify_single_point():
    code, out = run(["verify", "--m", "2", "--n", "0.5", "--r", "1", "--B", "1"])
    assert code == 0
    assert "Marcum" in out


def test_verify_plot(tmp_path):
    pytest.importorskip("matplotlib")
    png = tmp_path / "verify.png"
    assert run(["verify", "--m", "2", "--n", "0.5", "--r", "1", "--B", "1", "--plot", str(png)])[0] == 0
    assert png.exists()


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "toronto_ilhi", "eval", "ilhi", "--m", "1", "--n", "0.5",
                           "--a", "2", "--z", "0"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert float(proc.stdout.split()[0]) == 0.0
