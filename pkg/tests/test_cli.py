import json
import subprocess
import sys
from pathlib import Path

import pytest

from steinkit import cli

DATA = Path(__file__).resolve().parent.parent / "demos" / "data"


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_invariants_json(capsys):
    code, out, _ = run(capsys, "invariants", str(DATA / "lm_n3_k1.grid"), "--json")
    assert code == cli.EXIT_OK
    r = json.loads(out)
    assert r["hopf"] == "-6" and r["grading"] == "1" and r["chi"] == 3


def test_json_is_deterministic(capsys):
    a = run(capsys, "openbook", str(DATA / "unknot.grid"), "--json")[1]
    b = run(capsys, "openbook", str(DATA / "unknot.grid"), "--json")[1]
    assert a == b and json.loads(a)["fiber_genus"] == 1


def test_text_output(capsys):
    code, out, _ = run(capsys, "invariants", str(DATA / "empty.grid"))
    assert code == 0 and "hopf: -2" in out


def test_out_flag(capsys, tmp_path):
    dest = tmp_path / "r.json"
    code, out, _ = run(capsys, "invariants", str(DATA / "unknot.grid"), "--json", "--out", str(dest))
    assert code == 0 and out == ""
    assert json.loads(dest.read_text())["linking_matrix"] == [[-2]]


def test_malformed_input_exit_2(capsys):
    code, _, err = run(capsys, "invariants", str(DATA / "malformed.grid"))
    assert code == cli.EXIT_INPUT and "line 3" in err
    code, _, err = run(capsys, "invariants", str(DATA / "missing.grid"))
    assert code == cli.EXIT_INPUT
    code, _, _ = run(capsys, "example-lm", "1")
    assert code == cli.EXIT_INPUT
    code, _, _ = run(capsys, "example-lm", "4", "-k", "4")
    assert code == cli.EXIT_INPUT
    code, _, _ = run(capsys, "verify", "--depth", "0")
    assert code == cli.EXIT_INPUT


def test_openbook_close(capsys):
    code, out, _ = run(capsys, "openbook", str(DATA / "empty.grid"), "--close", "--json")
    assert code == 0
    cf = json.loads(out)["closed_fibration"]
    assert cf["fiber_genus"] == 2 and cf["chi_X"] == 236
    code, _, err = run(capsys, "openbook", str(DATA / "empty.grid"), "--close", "--no-stabilize")
    assert code == cli.EXIT_INPUT and "stabilization" in err


def test_example_lm_n6(capsys):
    code, out, _ = run(capsys, "example-lm", "6", "--json")
    assert code == 0
    r = json.loads(out)
    assert [s["rot_unknot"] for s in r["structures"]] == [-4, -2, 0, 2, 4]
    assert all(s["hopf"] == "-6" and s["grading"] == "1" for s in r["structures"])
    assert r["distinct_classes"] == 5 and set(r["distinctness"].values()) == {"DistinctContactInvariants"}
    assert r["rank_bound"] >= 6
    assert r["reference"]["tested"] is False


def test_example_lm_n2_single_structure(capsys):
    r = json.loads(run(capsys, "example-lm", "2", "--json")[1])
    assert [s["rotation_vector"] for s in r["structures"]] == [[0, 0]]
    assert r["distinctness"] == {}


def test_example_lm_single_k_close(capsys):
    r = json.loads(run(capsys, "example-lm", "3", "-k", "2", "--close", "--json")[1])
    (s,) = r["structures"]
    assert s["k"] == 2 and s["closed_fibration"]["fiber_genus"] >= 2


def test_verify_pass_and_fault(capsys):
    code, out, _ = run(capsys, "verify", "--json")
    assert code == cli.EXIT_OK and json.loads(out)["ok"]
    code, out, _ = run(capsys, "verify", "--fault", "flip-twist-sign")
    assert code == cli.EXIT_FAIL
    assert "FAIL  braid" in out


def test_verify_shallow_depth_skips(capsys):
    code, out, _ = run(capsys, "verify", "--depth", "1", "--json")
    r = json.loads(out)
    assert code == cli.EXIT_OK
    inv = next(s for s in r["suites"] if s["suite"] == "inversion")
    assert "skipped" in inv["detail"] or inv["status"] == "skip"


def test_console_script():
    p = subprocess.run([sys.executable, "-m", "steinkit.cli", "example-lm", "3", "--json"],
                       capture_output=True, text=True, timeout=120)
    assert p.returncode == 0 and json.loads(p.stdout)["n"] == 3
