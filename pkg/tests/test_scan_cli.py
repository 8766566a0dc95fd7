import csv
import io
import subprocess
import sys

import numpy as np
import pytest

from dampdeph.cli import run
from dampdeph.scan import (
    CSV_COLUMNS,
    ScanRecord,
    ScanSettings,
    evaluate_point,
    parse_csv,
    phase_scan,
    read_csv,
    records_to_csv,
    write_csv,
)

FAST = ScanSettings(restarts=4)


def _rows(text):
    return list(csv.DictReader(io.StringIO(text)))


# -- scan records --------------------------------------------------------------------

def test_dephasing_line_row():
    rec = evaluate_point(0.15, 0.0, FAST)
    for v in (rec.ic, rec.ir, rec.lower_bound):
        assert abs(v - 0.390160) < 1e-6
    assert abs(rec.yield_ - 0.0904464101) < 1e-9
    assert rec.lower_bound == max(rec.ir, rec.yield_)


def test_flags_follow_thresholds():
    assert "antideg" in evaluate_point(0.15, 0.5, FAST).flags
    assert "antideg" not in evaluate_point(0.15, 0.2, FAST).flags
    assert "yield>ir" in evaluate_point(0.15, 0.9, FAST).flags
    assert "nonadd" in evaluate_point(0.16, 0.2, ScanSettings(restarts=16)).flags


def test_invalid_point_recorded_not_raised():
    rec = evaluate_point(0.7, 0.2, FAST)
    assert rec.error and rec.ic is None
    assert "error:" in rec.row()[-1]


def test_phase_scan_smoke_grid():
    ps, gs = [0.05, 0.15, 0.25], [0.0, 0.2, 0.4]
    recs = phase_scan(ps, gs, FAST)
    assert [(r.p, r.g) for r in recs] == [(p, g) for p in ps for g in gs]
    for p in ps:
        ic = [r.ic for r in recs if r.p == p]
        assert np.all(np.diff(ic) <= 1e-9)
    for r in recs:
        assert r.lower_bound <= r.half_mi + 1e-8


def test_phase_scan_parallel_matches_serial():
    ps, gs = [0.1, 0.3], [0.0, 0.35, 0.7]
    settings = ScanSettings(quantities=frozenset({"ic", "ir", "yield", "lower_bound", "half_mi"}))
    assert phase_scan(ps, gs, settings, jobs=1) == phase_scan(ps, gs, settings, jobs=3)


def test_absent_quantities_are_empty_fields():
    rec = evaluate_point(0.2, 0.3, ScanSettings(quantities=frozenset({"ir"})))
    row = dict(zip(CSV_COLUMNS, rec.row()))
    assert row["ir"] != "" and row["ic"] == "" and row["delta_nonadd"] == "" and row["yield"] == ""


# -- CSV -------------------------------------------------------------------------------

def test_csv_round_trip(tmp_path):
    recs = phase_scan([0.1, 0.2], [0.1, 0.6], FAST) + [evaluate_point(0.9, 0.1)]
    path = tmp_path / "scan.csv"
    write_csv(recs, path)
    assert read_csv(path) == recs
    text = path.read_text()
    assert text.splitlines()[0] == ",".join(CSV_COLUMNS)
    assert "\r" not in text


def test_csv_twelve_significant_digits():
    rec = ScanRecord(0.1, 0.2, ic=1 / 3)
    assert rec.row()[2] == "0.333333333333"


def test_parse_csv_rejects_foreign_header():
    with pytest.raises(ValueError):
        parse_csv("a,b\n1,2\n")


def test_write_csv_leaves_no_temp_files(tmp_path):
    write_csv([ScanRecord(0.1, 0.2, ic=0.5, flags=("antideg", "nonadd"))], tmp_path / "x.csv")
    assert [f.name for f in tmp_path.iterdir()] == ["x.csv"]
    assert _rows((tmp_path / "x.csv").read_text())[0]["flags"] == "antideg;nonadd"


# -- CLI -------------------------------------------------------------------------------

def test_cli_point_dephasing_line(capsys):
    assert run(["point", "--p", "0.15", "--g", "0", "--restarts", "4"]) == 0
    row = _rows(capsys.readouterr().out)[0]
    assert abs(float(row["ic"]) - 0.390160) < 1e-6
    assert abs(float(row["ir"]) - 0.390160) < 1e-6
    assert abs(float(row["lower_bound"]) - 0.390160) < 1e-6
    assert abs(float(row["yield"]) - 0.090446) < 1e-6


def test_cli_protocol(capsys):
    assert run(["protocol", "--p", "0", "--g", "0.3"]) == 0
    out = dict(line.split("=") for line in capsys.readouterr().out.split())
    assert abs(float(out["success_prob"]) - 0.7) < 1e-12
    assert abs(float(out["bell_fidelity"]) - 1.0) < 1e-12


def test_cli_subcommands_columns(capsys):
    assert run(["sweep-g", "--p", "0.15", "--g-steps", "3"]) == 0
    rows = _rows(capsys.readouterr().out)
    assert len(rows) == 3 and all(r["delta_nonadd"] == "" and r["ic"] for r in rows)
    assert run(["nonadd", "--p", "0.16", "--g-min", "0.1", "--g-max", "0.2", "--g-steps", "2", "--restarts", "4"]) == 0
    rows = _rows(capsys.readouterr().out)
    assert all(r["delta_nonadd"] and r["ir"] == "" for r in rows)
    assert run(["bounds", "--p-steps", "2", "--g-steps", "2"]) == 0
    rows = _rows(capsys.readouterr().out)
    assert len(rows) == 4 and all(r["half_mi"] and r["ic"] == "" for r in rows)
    assert run(["phase", "--p-steps", "2", "--g-steps", "2", "--skip-nonadd"]) == 0
    rows = _rows(capsys.readouterr().out)
    assert all(r["delta_nonadd"] == "" and r["half_mi"] for r in rows)


def test_cli_byte_identical_files(tmp_path):
    args = ["phase", "--p-steps", "3", "--g-steps", "3", "--restarts", "4"]
    a, b, c = tmp_path / "a.csv", tmp_path / "b.csv", tmp_path / "c.csv"
    assert run(args + ["--out", str(a)]) == 0
    assert run(args + ["--out", str(b)]) == 0
    assert run(args + ["--out", str(c), "--jobs", "2"]) == 0
    assert a.read_bytes() == b.read_bytes() == c.read_bytes()


def test_cli_usage_errors(capsys):
    assert run([]) == 2
    assert run(["point", "--p", "0.1"]) == 2
    assert run(["point", "--p", "0.7", "--g", "0.1"]) == 2
    assert run(["protocol", "--p", "0.1", "--g", "0.1", "--s", "2"]) == 2
    assert run(["bogus"]) == 2
    assert "usage" in capsys.readouterr().err


def test_cli_check_passes(capsys):
    assert run(["check"]) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out and out.count("PASS") >= 9


def test_cli_check_fails_on_broken_invariant(monkeypatch, capsys):
    from dampdeph import checks

    monkeypatch.setitem(checks.CHECKS, "broken", lambda: (False, "forced"))
    assert run(["check"]) == 1
    assert "FAIL  broken" in capsys.readouterr().out


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "dampdeph", "protocol", "--p", "0.15", "--g", "0.2"],
                         capture_output=True, text=True, check=True)
    assert "success_prob=0.8" in res.stdout
