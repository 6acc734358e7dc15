import json

import pytest

from sat2tri.cli import main, parse_bipartition_set
from sat2tri import formula as fm
from conftest import EXAMPLE_Q


@pytest.fixture
def files(tmp_path):
    (tmp_path / "q.txt").write_text(EXAMPLE_Q + "\n")
    (tmp_path / "c.cnf").write_text("p cnf 1 2\n1 0\n-1 0\n")
    (tmp_path / "a.txt").write_text("a\n")
    return tmp_path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out.strip(), out.err


def test_genus_example(files, capsys):
    code, out, _ = run(capsys, "genus", "--cnf", files / "q.txt")
    assert code == 0
    assert out == "|Q|=12, claim genus 14, SAT: yes, min amalgamated genus 14"


def test_sat_and_genus_contradiction(files, capsys):
    assert run(capsys, "sat", "--cnf", files / "c.cnf")[1] == "UNSAT"
    code, out, _ = run(capsys, "genus", "--cnf", files / "c.cnf")
    assert out.endswith("SAT: no, min amalgamated genus ≥ 7")


def test_farey_and_fib(capsys):
    assert run(capsys, "farey", "dist", "3/2", "inf")[1] == "2"
    code, out, _ = run(capsys, "--json", "fib", "--k", "5")
    assert json.loads(out) == {"k": 5, "slope": "13/8", "distance": 3, "closed_form": 3}


def test_compile_and_verify(files, capsys):
    code, out, _ = run(capsys, "compile", "--cnf", files / "a.txt", "--out", files / "a.tri",
                       "--cert", files / "a.json", "--k-override", "1")
    assert code == 0 and "8 tetrahedra" in out
    cert = json.loads((files / "a.json").read_text())
    assert cert["tet_count"] == 8
    code, out, _ = run(capsys, "verify", "--tri", files / "a.tri")
    assert code == 0 and "H1 = Z/105" in out


def test_verify_failure_exit_1(files, capsys):
    (files / "open.tri").write_text("tri 1\n- - - -\n")
    code, out, _ = run(capsys, "verify", "--tri", files / "open.tri")
    assert code == 1 and "violation" in out


def test_bipartitions(files, capsys):
    code, out, _ = run(capsys, "bipartitions", "--n", "3", "--set", "1|23,12|3", "--out", files / "b.txt")
    assert code == 0
    f = fm.parse_expr((files / "b.txt").read_text().strip())
    assert len(fm.brute_force_sat(f)) == 2


def test_bipartition_set_syntax():
    P = parse_bipartition_set("1|23, 12|3", 3)
    assert [str(b) for b in P] == ["1|23", "12|3"]
    assert str(parse_bipartition_set("|12", 2)[0]) == "|12"


def test_usage_errors(files, capsys):
    assert run(capsys, "farey", "dist", "x", "y")[0] == 2
    assert run(capsys)[0] == 2
    assert run(capsys, "sat", "--cnf", files / "missing.txt")[0] == 2
    assert run(capsys, "bipartitions", "--n", "2", "--set", "1|1", "--out", files / "z")[0] == 2
    (files / "bad.txt").write_text("(a & b) | c\n")
    code, _, err = run(capsys, "sat", "--cnf", files / "bad.txt")
    assert code == 2 and "not in CNF" in err


def test_concrete_without_blocks(files, capsys, monkeypatch):
    monkeypatch.delenv("SAT2TRI_BLOCKS", raising=False)
    code, _, err = run(capsys, "compile", "--cnf", files / "a.txt", "--out", files / "x", "--cert", files / "y",
                       "--mode", "concrete")
    assert code == 2


def test_concrete_gate_failure_exit_1(files, capsys, tmp_path):
    from sat2tri.blockgraph import BlockType
    from sat2tri.tri.blocks import save_block, synthetic_library

    lib = synthetic_library()
    save_block(tmp_path / "var.json", lib[BlockType.VAR])
    code, _, err = run(capsys, "compile", "--cnf", files / "a.txt", "--out", files / "x", "--cert", files / "y",
                       "--mode", "concrete", "--blocks", tmp_path)
    assert code == 1 and "END" in err


def test_genus_matches_sat_verdict(files, capsys):
    for text in ["a | b", "a & ~a", "(a | b) & (~a | ~b)", "(a) & (~a | b) & ~b"]:
        (files / "t.txt").write_text(text)
        _, g, _ = run(capsys, "--json", "genus", "--cnf", files / "t.txt")
        _, s, _ = run(capsys, "--json", "sat", "--cnf", files / "t.txt")
        g, s = json.loads(g), json.loads(s)
        assert (g["min_genus"] == str(g["claim_genus"])) == s["sat"]
