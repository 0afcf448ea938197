from __future__ import annotations

import json
import subprocess
import sys

import pytest

from torusfill.cli import main, parse_range
from torusfill.raydyn import read_phi_csv


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_classify_json(capsys):
    code, out, _ = run(capsys, "classify", "-A", "1,0;0,1", "-n", "0", "--json")
    assert code == 0
    rep = json.loads(out)
    assert rep["strong"] == "yes" and "Eliashberg" in rep["provenance"]
    assert set(rep) >= {"matrix", "n", "weak", "strong", "provenance", "witness", "notes"}


def test_classify_human(capsys):
    code, out, _ = run(capsys, "classify", "-A", "1,0;-2,1", "-n", "3")
    assert code == 0 and "strong:     no" in out and "witness" in out


def test_classify_with_chain(capsys):
    code, out, _ = run(capsys, "classify", "-A", "2,1;-3,-1", "-n", "2",
                       "--chain", "2,1;1,1 n=2 steps=-1,-1", "--json")
    assert code == 0 and json.loads(out)["rule"] == "R5"


def test_classify_with_word(capsys):
    code, out, _ = run(capsys, "classify", "-A", "1,0;-1,1", "-n", "1",
                       "--word", "Em1", "--json")
    assert code == 0 and json.loads(out)["strong"] == "unknown"


def test_surgery(capsys):
    code, out, _ = run(capsys, "surgery", "-A", "1,0;-1,1", "-n", "3", "--steps", "1")
    assert code == 0 and "final  (1,0;0,1, n=2)" in out
    code, out, _ = run(capsys, "surgery", "-A", "1,0;0,1", "-n", "1", "--steps", "-1,-1", "--json")
    assert json.loads(out)["final"] == {"matrix": "1,0;-2,1", "n": 2}


def test_surgery_flags_oracle_only_steps(capsys):
    code, out, _ = run(capsys, "surgery", "-A", "2,1;1,1", "-n", "2", "--steps", "1", "--json")
    assert code == 0 and json.loads(out)["states"][0]["source"] == "oracle-only"
    code, out, _ = run(capsys, "surgery", "-A", "1,0;-1,1", "-n", "3", "--steps", "1")
    assert "oracle only" not in out


def test_decompose(capsys):
    code, out, _ = run(capsys, "decompose", "-A", "-1,0;0,-1", "--json")
    rep = json.loads(out)
    assert code == 0 and rep["length"] == 6 and rep["word"] == "Em1,E1p,Em1,E1p,Em1,E1p"


def test_twisting(capsys):
    code, out, _ = run(capsys, "twisting", "-A", "1,0;1,1", "--branch", "3", "--json")
    rep = json.loads(out)
    assert code == 0 and rep["n"] == 2 and rep["sup_attained"]
    code, out, _ = run(capsys, "twisting", "-A", "1,0;0,1", "-n", "4", "--json")
    assert json.loads(out)["branch"] == 5


def test_phi_export(capsys, tmp_path):
    p = tmp_path / "phi.csv"
    code, out, _ = run(capsys, "phi-export", "-A", "2,1;1,1", "-n", "1", "-o", str(p), "--grid", "128")
    assert code == 0 and p.exists()
    f = read_phi_csv(p)
    assert f.grid == 128 and f.meta["n"] == 1 and len(f.t) == 257


def test_verify_table_default(capsys):
    code, out, _ = run(capsys, "verify-table")
    assert code == 0
    assert out.strip().endswith("agreements: all, disagreements: 0")
    assert "cases: 312" in out


def test_verify_table_jobs_identical(capsys):
    args = ["verify-table", "--k", "-2..2", "--l", "-3..3", "--n0", "1..2", "--json"]
    _, one, _ = run(capsys, *args)
    _, four, _ = run(capsys, *args, "--jobs", "3")
    assert one == four
    assert json.loads(one)["disagreements"] == 0


def test_deterministic_json(capsys):
    args = ["classify", "-A", "2,1;1,1", "-n", "5", "--json"]
    assert run(capsys, *args)[1] == run(capsys, *args)[1]


@pytest.mark.parametrize("argv", [
    ["classify", "-A", "1,1;1,1", "-n", "0"],
    ["classify", "-A", "1,0;0", "-n", "0"],
    ["classify", "-A", "1,0;0,1", "-n", "-1"],
    ["surgery", "-A", "1,0;0,1", "-n", "1", "--steps", "1,0"],
    ["verify-table", "--k", "3..1"],
    ["verify-table", "--n0", "0..2"],
    ["twisting", "-A", "1,0;1,1", "--branch", "0"],
    ["bogus"],
    [],
])
def test_validation_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 1 and err


def test_certification_failure_exit_code(capsys, monkeypatch):
    from torusfill import cli
    from torusfill.raydyn import CertificationError

    def boom(*a, **k):
        raise CertificationError("forced")

    monkeypatch.setattr(cli, "lift_for", boom)
    code, _, err = run(capsys, "twisting", "-A", "1,0;0,1", "-n", "1")
    assert code == 2 and "certification" in err


def test_parse_range():
    assert parse_range("-3..3") == [-3, -2, -1, 0, 1, 2, 3]
    assert parse_range("1,4") == [1, 4]
    assert parse_range("2") == [2]


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "torusfill", "surgery", "-A", "1,0;0,1",
                        "-n", "1", "--steps", "-1"], capture_output=True, text=True)
    assert r.returncode == 0 and "n=2" in r.stdout
