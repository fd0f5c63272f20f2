from __future__ import annotations

import csv
import io
import json
import subprocess
import sys

import pytest

from sudler.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_eval_trivial(capsys):
    code, out, _ = run(capsys, "eval", "--alpha", "[0;(1)]", "--N", "0")
    d = json.loads(out)
    assert code == 0 and d["lo"] == "1" and d["hi"] == "1"
    code, out, _ = run(capsys, "eval", "--alpha", "1/2", "--N", "2")
    d = json.loads(out)
    assert float(d["lo"]) == 0 and float(d["hi"]) == 0


def test_bad_literal_is_usage_error(capsys):
    code, _, err = run(capsys, "eval", "--alpha", "[0;(1", "--N", "3")
    assert code == 3 and "parse" in err
    with pytest.raises(SystemExit) as e:
        main(["no-such-command"])
    assert e.value.code == 3


def test_limit_json(capsys):
    code, out, _ = run(capsys, "limit", "--alpha", "[0;(6,5)]", "--r", "0", "--eps", "0", "--T", "20000")
    d = json.loads(out)
    assert code == 0
    assert 1.03 < float(d["lo"]) < float(d["hi"]) < 1.06


def test_figure1_csv(capsys):
    code, out, _ = run(capsys, "figure1", "--T", "10", "--R", "10")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["x", "F"] and len(rows) == 11
    code, out, _ = run(capsys, "figure1", "--T", "10", "--R", "0")
    assert out.strip() == "x,F"


def test_figure6a_csv(capsys):
    code, out, _ = run(capsys, "figure6a", "--T", "1000", "--digits", "5", "--eps-min", "0", "--eps-max", "0")
    rows = list(csv.reader(io.StringIO(out)))
    assert len(rows) == 2
    head, row = rows
    rec = dict(zip(head, row))
    assert float(rec["lo"]) > 1
    code, out, _ = run(capsys, "figure6a", "--T", "1000", "--eps-min", "1/2", "--eps-max", "0")
    assert len(out.strip().splitlines()) == 1


def test_smoke_scale_is_not_certifying(capsys):
    code, out, _ = run(capsys, "verify-theorem1", "--case", "9-18", "--scale", "20")
    d = json.loads(out)
    assert d["status"] == "pass" and d["certifying"] is False and code == 2


def test_certifying_pass_exit_zero(capsys):
    code, out, _ = run(capsys, "verify-theorem1", "--case", ">=18")
    assert code == 0 and json.loads(out)["certifying"] is True


def test_deterministic_output(tmp_path):
    outs = []
    for j in range(2):
        p = tmp_path / f"r{j}.json"
        subprocess.run([sys.executable, "-m", "sudler.cli", "verify-theorem3", "--alpha", "[0;(5,4)]",
                        "--summary-only", "-o", str(p)], check=False)
        outs.append(p.read_bytes())
    assert outs[0] == outs[1] and len(outs[0]) > 100


def test_precision_env(monkeypatch, capsys):
    monkeypatch.setenv("SUDLER_PRECISION", "20")
    code, _, err = run(capsys, "eval", "--alpha", "[0;(1)]", "--N", "3")
    assert code == 3 and "53" in err
