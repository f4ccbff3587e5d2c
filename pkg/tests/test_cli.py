import io
import json
import subprocess
import sys
from fractions import Fraction as F
from pathlib import Path

import pytest

from guesswork import cli
from guesswork.binary import brute_force_optimal, enumerate_optimal_partitions
from guesswork.core import parse_distribution, unconstrained_minimum
from guesswork.mary import mary_brute_force_optimal

FIX = Path(__file__).parent / "fixtures"
PAIR = str(FIX / "pair.json")
TERNARY = str(FIX / "ternary.json")
SYS = str(FIX / "sys.dmd")


def run(*argv):
    res = cli.dispatch(list(argv))
    return res.exit_code, res.payload


def frac(text):
    return F(text)


def test_optimal_golden():
    code, out = run("optimal", "--input", PAIR)
    assert code == 0 and out["status"] == "ok"
    assert out["count"] == 2 and out["canonical_count"] == 1 and out["components"] == 1
    assert out["zigzag_optimal"] is True
    assert out["G"] == "11/10" and out["G_decimal"] == "1.1"
    assert sorted(out["partitions"]) == [[1], [2]]
    assert out["levels"] == ["9/10", "1/10"]
    dist, noise, _ = parse_distribution(Path(PAIR).read_text())
    assert frac(out["G"]) == enumerate_optimal_partitions(dist, noise).value(
        parse_distribution(Path(PAIR).read_text())[2])


def test_zigzag_and_brute_golden():
    code, out = run("zigzag", "--input", PAIR)
    assert code == 0 and out["A"] == [1] and out["G"] == "11/10" and out["unconstrained"] == "11/10"
    code, out = run("brute", "--input", PAIR)
    assert code == 0 and out["min"] == "11/10" and out["argmin"] == [[1]]
    code, out = run("zigzag", "--input", TERNARY)
    assert out["classes"] == [[3], [1, 4], [2]] and out["G"] == "2019/1000"
    assert out["unconstrained"] == "403/200"


def test_mary_optimal_golden():
    code, out = run("mary-optimal", "--input", TERNARY)
    dist, noise, f = parse_distribution(Path(TERNARY).read_text())
    best, parts = mary_brute_force_optimal(dist, noise, f)
    assert code == 0
    assert frac(out["min"]) == best == F(1009, 500)
    assert out["argmin_count"] == len(parts) == 6
    assert out["zigzag_optimal"] is False and out["attains_unconstrained"] is False
    assert frac(out["unconstrained"]) == unconstrained_minimum(dist, noise, f)


def test_achievable_golden():
    code, out = run("achievable", "--input", TERNARY)
    assert code == 0 and out["achievable"] is False and out["unconstrained"] == "403/200"
    code, out = run("achievable", "--input", PAIR)
    assert out["achievable"] is True and out["G"] == "11/10"


def test_achievable_ties(tmp_path):
    doc = {"probs": ["1/2", "1/2"], "noise": {"type": "bsc", "eps": "1/10"}}
    path = tmp_path / "tie.json"
    path.write_text(json.dumps(doc))
    assert run("achievable", "--input", str(path))[0] == 1
    code, out = run("achievable", "--input", str(path), "--allow-ties")
    assert code == 0 and out["achievable"] is True


def test_dmd_solve_golden():
    assert run("dmd", "solve", "--input", SYS) == (0, {"status": "ok", "sat": True, "assignment": [0, 1]})


def test_reductions(tmp_path):
    nae = tmp_path / "one.naecnf"
    nae.write_text("p naecnf 3 1\n1 2 3 0\n")
    out_path = tmp_path / "one.dmd"
    code, out = run("reduce", "nae2dmd", "--input", str(nae), "--output", str(out_path))
    assert code == 0 and out["num_vars"] == 8 and out["num_disequations"] == 12
    assert out_path.read_text() == out["system"]
    code, solved = run("dmd", "solve", "--input", str(out_path))
    assert solved["sat"] is True

    code, out = run("reduce", "dmd2sigma", "--input", SYS)
    assert code == 0 and out["blocks"] == out["rows"] and out["variable_rows"] == [1, 2]
    assert len(out["helper_rows"]) == 1

    graph = tmp_path / "g.dimacs"
    code, out = run("reduce", "dmd2graph", "--input", SYS, "--alpha", "--output", str(graph))
    assert code == 0 and out["vertices"] == 6 and out["edges"] == 9 and out["alpha"] == 2
    assert "p edge 6 9" in graph.read_text()


def test_asym_and_bounds(tmp_path):
    path = tmp_path / "asym.json"
    path.write_text(json.dumps({"probs": ["0.8", "0.2"],
                                "noise": {"type": "asym", "eps": "0.1", "delta": "0.05"}}))
    code, out = run("asym", "--input", str(path))
    assert code == 0 and out["small_noise"] is True and out["A"] == [1] and out["G"] == "53/50"
    assert run("bounds", "--input", str(path))[0] == 1

    code, out = run("bounds", "--input", TERNARY)
    assert code == 0 and out["optimum"] == "1009/500" and out["kappa_universal"] is True
    assert out["massey_lower_bound"] <= float(F(1009, 500))
    code, out = run("bounds", "--input", TERNARY, "--kappa", "e")
    assert out["kappa_universal"] is False


def test_simulate_is_deterministic():
    a = run("simulate", "--input", PAIR, "--trials", "20000", "--seed", "5", "--partition", "1")
    b = run("simulate", "--input", PAIR, "--trials", "20000", "--seed", "5", "--partition", "1")
    assert a == b and a[0] == 0
    out = a[1]
    assert out["exact"] == "11/10" and out["A"] == [1]
    assert abs(out["mean"] - 1.1) <= 5 * out["std_error"]
    code, out = run("simulate", "--input", TERNARY, "--trials", "1000", "--classes", "1,2,0,1")
    assert code == 0 and out["exact"] == "2019/1000"


def test_moment_table_flag(tmp_path):
    f = tmp_path / "f.json"
    f.write_text(json.dumps(["1", "5"]))
    code, out = run("optimal", "--input", PAIR, "--f", str(f))
    assert code == 0 and out["G"] == "7/5"
    f.write_text(json.dumps(["1", "5", "6"]))
    assert run("optimal", "--input", PAIR, "--f", str(f))[0] == 1


def test_brute_threads_match_serial(tmp_path):
    probs = [F(k, 105) for k in range(1, 15)]
    path = tmp_path / "big.json"
    path.write_text(json.dumps({"probs": [str(p) for p in probs], "noise": {"type": "bsc", "eps": "1/7"}}))
    serial = run("brute", "--input", str(path))
    assert run("brute", "--input", str(path), "--threads", "2") == serial
    dist, noise, f = parse_distribution(path.read_text())
    assert frac(serial[1]["min"]) == brute_force_optimal(dist, noise, f)[0]


@pytest.mark.parametrize("argv,code", [
    (["frobnicate"], 2),
    ([], 2),
    (["optimal"], 2),
    (["optimal", "--input", PAIR, "--bogus"], 2),
    (["optimal", "--input", PAIR, "--threads", "0"], 2),
    (["dmd"], 2),
    (["optimal", "--input", "/nonexistent/x.json"], 1),
    (["optimal", "--input", TERNARY], 1),
    (["dmd", "solve", "--input", PAIR], 1),
    (["simulate", "--input", PAIR, "--partition", "7"], 1),
    (["simulate", "--input", TERNARY, "--partition", "1"], 1),
])
def test_exit_codes(argv, code):
    res = cli.dispatch(argv)
    assert res.exit_code == code
    assert res.status == "error" and "error" in res.payload


def test_malformed_json_is_a_domain_error(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    assert run("optimal", "--input", str(path))[0] == 1


def test_stdin_and_pretty(monkeypatch, capsys):
    monkeypatch.setattr(sys, "stdin", io.StringIO(Path(PAIR).read_text()))
    assert cli.main(["optimal", "--input", "-", "--pretty"]) == 0
    text = capsys.readouterr().out
    assert text.startswith("{\n  ") and json.loads(text)["G"] == "11/10"


def test_errors_go_to_stderr(capsys):
    assert cli.main(["optimal", "--input", TERNARY]) == 1
    captured = capsys.readouterr()
    assert captured.out == "" and json.loads(captured.err)["status"] == "error"


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "guesswork", "dmd", "solve", "--input", SYS],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["assignment"] == [0, 1]
