import json
import subprocess
import sys

import pytest

from ucceval.cli import main

T1_CSV = "y,y_hat,z_lower,z_upper\n1,0,1,1\n2,0,1,1\n-0.5,0,0.5,0.5\n0,0,2,2\n"


@pytest.fixture
def t1_csv(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    (tmp_path / "t1.csv").write_text(T1_CSV)
    return "t1.csv"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_evaluate_t1(capsys, t1_csv):
    code, out, _ = run(capsys, "evaluate", t1_csv)
    assert code == 0
    m = json.loads(out)["models"][0]
    assert m["auucc"] == 1.125 and m["reference_auucc"] == 0.875
    assert m["gain_vs_constant"] == pytest.approx(-28.571428571, abs=1e-9)
    assert (m["n"], m["n_infinite"]) == (4, 0)


def test_evaluate_excess_deficit_mae(capsys, t1_csv):
    code, out, _ = run(capsys, "evaluate", t1_csv, "--axes", "excess:deficit",
                       "--cost-c", "0.5", "--at-missrate", "0.25")
    m = json.loads(out)["models"][0]
    assert m["auucc"] == pytest.approx(0.390625)
    assert 2 * m["cost_at_op"]["cost"] == pytest.approx(0.75, abs=1e-12)
    assert m["cost_at_op"]["mae"] == 0.75


def test_evaluate_partial_and_csv(capsys, t1_csv):
    code, out, _ = run(capsys, "evaluate", t1_csv, "--partial", "0:0.5", "--format", "csv")
    header, row = out.splitlines()
    rec = dict(zip(header.split(","), row.split(",")))
    assert float(rec["partial_auucc"]) == 0.28125


def test_missing_file_exit_3(capsys, t1_csv):
    code, _, err = run(capsys, "evaluate", "missing.csv")
    assert code == 3 and "missing.csv" in err


def test_parse_error_exit_3(capsys, tmp_path, t1_csv):
    (tmp_path / "bad.csv").write_text("y,y_hat,z_lower,z_upper\n1,0,abc,1\n")
    code, _, err = run(capsys, "evaluate", "bad.csv")
    assert code == 3 and "line 2" in err


def test_all_infinite_exit_4(capsys, tmp_path, t1_csv):
    (tmp_path / "z.csv").write_text("y,y_hat,z_lower,z_upper\n1,0,0,0\n2,0,0,0\n")
    code, _, err = run(capsys, "evaluate", "z.csv", "--allow-infinite")
    assert code == 4


def test_infinite_needs_flag(capsys, tmp_path, t1_csv):
    (tmp_path / "z.csv").write_text(T1_CSV + "3,0,0,0\n")
    assert run(capsys, "evaluate", "z.csv")[0] == 4
    code, out, _ = run(capsys, "evaluate", "z.csv", "--allow-infinite")
    m = json.loads(out)["models"][0]
    assert code == 0 and m["n_infinite"] == 1 and m["auucc"] == 1.125


def test_usage_errors(capsys, t1_csv):
    assert run(capsys, "evaluate", t1_csv, "--axes", "bandwidth:deficit")[0] == 2
    assert run(capsys, "evaluate", t1_csv, "--cost-c", "1.5")[0] == 2
    assert run(capsys, "compare", t1_csv, t1_csv, "--n-perm", "0")[0] == 2
    assert run(capsys)[0] == 2


def test_compare_identical(capsys, t1_csv):
    code, out, _ = run(capsys, "compare", t1_csv, t1_csv, "--n-perm", "99")
    pair = json.loads(out)["pairwise"][0]
    assert code == 0 and pair["p_value"] == 1.0 and pair["delta_auucc"] == 0.0


def test_compare_eps_vs_random(capsys, t1_csv):
    assert run(capsys, "synth", "--n", "500", "--bands", "epsilon_perfect", "--out", "e.csv")[0] == 0
    assert run(capsys, "synth", "--n", "500", "--bands", "random", "--out", "r.csv")[0] == 0
    code, out, _ = run(capsys, "compare", "e.csv", "r.csv")
    assert code == 0 and json.loads(out)["pairwise"][0]["p_value"] <= 0.01


def test_compare_mismatched_exit_4(capsys, t1_csv):
    run(capsys, "synth", "--n", "4", "--out", "h.csv")
    assert run(capsys, "compare", t1_csv, "h.csv")[0] == 4


def test_curve_t1(capsys, t1_csv):
    code, out, _ = run(capsys, "curve", t1_csv)
    lines = [ln for ln in out.splitlines() if not ln.startswith("#")]
    assert lines == ["k,x,y", "0.0,0.0,0.75", "1.0,1.125,0.25", "2.0,2.25,0.0"]
    assert "# axes=bandwidth:miss_rate n=4 n_infinite=0" in out


def test_curve_with_reference(capsys, t1_csv):
    out = run(capsys, "curve", t1_csv, "--include-reference")[1]
    assert out.count("k,x,y") == 2 and "# model=t1:constant" in out


def test_curve_normalized(capsys, t1_csv):
    import numpy as np
    raw = json.loads(run(capsys, "curve", t1_csv, "--format", "json")[1])[0]
    std = json.loads(run(capsys, "curve", t1_csv, "--format", "json", "--normalize", "std")[1])[0]
    sigma = np.std([1, 2, -0.5, 0])
    for a, b in zip(raw["points"], std["points"]):
        assert b["x"] == pytest.approx(a["x"] / sigma, rel=1e-12)
        assert b["y"] == a["y"]


def test_plot_dataset(capsys, t1_csv):
    code, out, _ = run(capsys, "plot", t1_csv, "--cost-c", "0.1")
    assert code == 0
    assert out.count("<polyline") == 2 and 'class="isocost"' in out
    assert out == run(capsys, "plot", t1_csv, "--cost-c", "0.1")[1]


def test_plot_curve_file(capsys, t1_csv):
    run(capsys, "curve", t1_csv, "--include-reference", "--out", "c.csv")
    code, out, _ = run(capsys, "plot", "c.csv")
    assert code == 0 and out.count("<polyline") == 2 and "stroke-dasharray=\"3,3\"" in out


def test_synth_header_and_determinism(capsys, t1_csv):
    a = run(capsys, "synth", "--kind", "xsinx", "--bands", "weak", "--n", "50")[1]
    b = run(capsys, "synth", "--kind", "xsinx", "--bands", "weak", "--n", "50")[1]
    assert a == b and a.startswith("# generator: xsinx")
    assert run(capsys, "synth", "--kind", "xsinx", "--bands", "oracle")[0] == 2


def test_provenance_reproduces(capsys, t1_csv):
    run(capsys, "evaluate", t1_csv, "--partial", "0:0.5", "--at-missrate", "0.25", "--out", "a.json")
    with open("a.json") as fh:
        first = fh.read()
    argv = json.loads(first)["provenance"]["argv"]
    assert run(capsys, *argv, "--out", "b.json")[0] == 0
    with open("b.json") as fh:
        assert fh.read() == first


def test_module_entry_point(tmp_path):
    (tmp_path / "t1.csv").write_text(T1_CSV)
    proc = subprocess.run([sys.executable, "-m", "ucceval", "evaluate", "t1.csv"],
                          cwd=tmp_path, capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["models"][0]["auucc"] == 1.125
    proc = subprocess.run([sys.executable, "-m", "ucceval", "evaluate", "nope.csv"],
                          cwd=tmp_path, capture_output=True, text=True)
    assert proc.returncode == 3
