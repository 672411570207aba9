from __future__ import annotations

import json
import subprocess
import sys

import pytest

from hermcodes.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


def test_points(capsys, tmp_path):
    code, d = run_json(capsys, "points", "--p", "2", "--a", "1", "--n", "4")
    assert code == 0 and d["count"] == 165 and d["ambient"] == 341
    path = tmp_path / "pts.csv"
    code, d = run_json(capsys, "points", "--p", "2", "--n", "3", "--csv", str(path))
    lines = path.read_text().splitlines()
    assert lines[0] == "x0,x1,x2,x3" and len(lines) == 46


def test_field_info(capsys):
    code, d = run_json(capsys, "field-info", "--p", "2", "--a", "2")
    assert code == 0 and (d["t"], d["q"]) == (4, 16)


def test_code_info(capsys):
    code, d = run_json(capsys, "code-info", "--p", "2", "--n", "3", "--h", "2")
    assert (d["length"], d["dimension"]) == (45, 10)


def test_divisor(capsys):
    code, d = run_json(capsys, "divisor", "--p", "3", "--a", "1", "--n", "7", "--h", "3")
    assert code == 0 and d["lambda"] == 3 and d["divisor"] == 27
    code, d = run_json(capsys, "divisor", "--n", "4", "--h", "2")
    assert d["lambda"] == 2 and "divisor" not in d


def test_divisor_verify(capsys):
    code, d = run_json(capsys, "divisor", "--p", "2", "--n", "4", "--h", "2", "--verify", "sampled", "3000")
    assert code == 0 and d["violations"] == [] and d["samples"] == 3000
    assert all(w % 4 == 0 for w in d["checkedWeights"]) and d["observedGcd"] % 4 == 0
    code, d = run_json(capsys, "divisor", "--p", "2", "--n", "3", "--h", "2", "--verify", "exhaustive")
    assert code == 0 and d["observedGcd"] == 2 and len(d["checkedWeights"]) == 12


def test_divisor_errors(capsys):
    assert run(capsys, "divisor", "--n", "2", "--h", "3")[0] == 1
    assert run(capsys, "divisor", "--n", "3", "--h", "2", "--verify", "exhaustive")[0] == 1
    assert run(capsys, "divisor", "--p", "2", "--n", "3", "--h", "2", "--verify", "maybe")[0] == 1


def test_spectrum_exhaustive(capsys):
    code, out, _ = run(capsys, "spectrum", "--p", "2", "--a", "1", "--n", "3", "--h", "2", "--mode", "exhaustive")
    d = json.loads(out)
    assert code == 0 and d["length"] == 45 and d["dimension"] == 10
    weights = [w for w, _ in d["spectrum"]]
    assert weights == sorted(weights) and weights[0] == 22
    _, out2, _ = run(capsys, "spectrum", "--p", "2", "--n", "3", "--h", "2", "--threads", "2")
    assert out == out2


def test_spectrum_threads_env(capsys, monkeypatch, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(capsys, "spectrum", "--p", "2", "--n", "3", "--h", "2", "--out", str(a))
    monkeypatch.setenv("HERMCODES_THREADS", "2")
    run(capsys, "spectrum", "--p", "2", "--n", "3", "--h", "2", "--out", str(b))
    assert a.read_bytes() == b.read_bytes()


def test_spectrum_sampled(capsys):
    args = ("spectrum", "--p", "3", "--n", "3", "--h", "2", "--mode", "sampled", "--samples", "500", "--seed", "4")
    _, out1, _ = run(capsys, *args)
    _, out2, _ = run(capsys, *args, "--threads", "3")
    assert out1 == out2
    d = json.loads(out1)
    assert d["samples"] == 500 and d["seed"] == 4 and sum(c for _, c in d["spectrum"]) == 500


def test_budget_exit(capsys):
    code, _, err = run(capsys, "spectrum", "--p", "3", "--n", "3", "--h", "3")
    assert code == 1 and "sampled" in err


def test_usage_exit(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["spectrum", "--n", "3"])
    assert exc.value.code == 1
    assert run(capsys, "field-info", "--p", "4")[0] == 1


def test_lines(capsys):
    code, d = run_json(capsys, "lines", "--p", "2")
    assert code == 0 and (d["contained"], d["tangent"], d["secant"]) == (27, 90, 240)


def test_quadric_census_mismatch(capsys):
    code, d = run_json(capsys, "quadric-census", "--p", "2", "--skip-quadrics")
    assert code == 2 and d["weight_claims"]["mismatch"]
    assert "quadrics" not in d


def test_quadric_census_full(capsys):
    code, d = run_json(capsys, "quadric-census", "--p", "2")
    assert code == 2 and d["quadrics"]["total"] == 349525
    assert d["quadrics"]["elliptic_audit"]["max_section"] <= 17


def test_quadric_census_csv(capsys):
    code, out, _ = run(capsys, "quadric-census", "--p", "2", "--emit", "csv")
    rows = out.strip().splitlines()
    assert code == 2 and rows[0].startswith("pattern,section") and len(rows) == 7


def test_transform_check(capsys):
    code, d = run_json(capsys, "transform-check", "--p", "2", "--n", "3", "--form", "x0*x1", "--random", "3")
    assert code == 0 and d["ok"] and len(d["results"]) == 5
    assert d["results"][1]["N"] == 46


def test_conjecture(capsys):
    code, d = run_json(capsys, "conjecture", "--p", "2", "--n", "3", "--h", "2")
    assert code == 0 and d["confirmed"]
    code, d = run_json(capsys, "conjecture", "--p", "3", "--n", "3", "--h", "2", "--mode", "structured")
    assert code == 0 and len(d["union_weights"]) == 5


def test_acceptance_subset(capsys):
    code, _, err = run(capsys, "acceptance", "--criteria", "1,8")
    assert code == 0 and "criterion 1" in err and "2/2" in err
    code, _, err = run(capsys, "acceptance", "--criteria", "5")
    assert code == 2 and "failed: 5" in err
    assert run(capsys, "acceptance", "--criteria", "99")[0] == 1


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "hermcodes", "divisor", "--n", "3", "--h", "2"],
                         capture_output=True, text=True, check=True)
    assert json.loads(res.stdout)["lambda"] == 1
