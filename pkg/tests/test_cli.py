import subprocess
import sys

import pytest

from compsem.cli import main

EX1 = """\
domain: a b
pred p/2 = { (a,b) (b,a) }
pred q/2 = { (a,a) (b,a) }
"""
SWAP = """\
domain: a b
const c = b
func f/1 = { (a)->b (b)->a }
pred q/1 = { (a) }
"""


@pytest.fixture
def files(tmp_path):
    (tmp_path / "ex1.txt").write_text(EX1)
    (tmp_path / "swap.txt").write_text(SWAP)
    return tmp_path


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_eval_join(files, capsys):
    code, out, _ = run(capsys, "eval", "--structure", str(files / "ex1.txt"),
                       "--formula", "p(x,y) & q(y,z)")
    assert code == 0
    assert out == "x | y | z\n---------\na | b | a\nb | a | a\nENGINES AGREE\n"


def test_eval_oplus(files, capsys):
    code, out, _ = run(capsys, "eval", "--structure", str(files / "ex1.txt"),
                       "--formula", "p(x,y) | q(y,z)", "--engine", "comp")
    assert code == 0
    rows = ["a | a | a", "a | b | a", "a | b | b", "b | a | a", "b | a | b", "b | b | a"]
    assert out == "x | y | z\n---------\n" + "\n".join(rows) + "\n"


def test_eval_sentence(files, capsys):
    code, out, _ = run(capsys, "eval", "--structure", str(files / "ex1.txt"),
                       "--formula", "exists x. p(x,x)", "--engine", "direct")
    assert (code, out) == (0, "false\n")


def test_eval_term(files, capsys):
    s = str(files / "swap.txt")
    assert run(capsys, "eval-term", "--structure", s, "--term", "x")[1] == "(a)->a\n(b)->b\n"
    assert run(capsys, "eval-term", "--structure", s, "--term", "c")[1] == "()->b\n"
    assert run(capsys, "eval-term", "--structure", s, "--term", "f(f(x))")[1] == "(a)->a\n(b)->b\n"


def test_exit_codes(files, capsys):
    s = str(files / "ex1.txt")
    assert run(capsys, "eval", "--structure", s, "--formula", "p(x")[0] == 1
    assert run(capsys, "eval", "--structure", str(files / "missing.txt"), "--formula", "p(x,y)")[0] == 1
    code, _, err = run(capsys, "eval", "--structure", s, "--formula",
                       "exists x y z w. p(x,y) & q(z,w)", "--budget", "3")
    assert code == 2 and "budget" in err
    assert run(capsys, "eval", "--structure", s)[0] == 1


def test_parse_command(capsys):
    code, out, _ = run(capsys, "parse", "--formula", "exists x. (p(x,y) | q(x)) & q(c)")
    assert (code, out) == (0, "exists x. (p(x, y) | q(x)) & q(c)\n")
    code, out, _ = run(capsys, "parse", "--signature", "func g/2", "--term", "g(x,g(y,z))")
    assert (code, out) == (0, "g(x, g(y, z))\n")


def test_check_equiv_bundled(capsys):
    code, out, _ = run(capsys, "check-equiv", "--exhaustive")
    assert code == 0 and out.endswith("ENGINES AGREE\n")


def test_check_equiv_random_deterministic(capsys):
    a = run(capsys, "check-equiv", "--trials", "50", "--seed", "7")
    b = run(capsys, "check-equiv", "--trials", "50", "--seed", "7")
    assert a[:2] == b[:2] and a[0] == 0


def test_check_equiv_bad_corpus(tmp_path, capsys):
    (tmp_path / "c.txt").write_text("# one bad line\nzz(x)\n")
    assert run(capsys, "check-equiv", "--corpus", str(tmp_path / "c.txt"))[0] == 1


def test_check_equiv_custom_signature(tmp_path, capsys):
    (tmp_path / "sig.txt").write_text("pred e/2\n")
    (tmp_path / "c.txt").write_text("forall x. exists y. e(x,y) & !e(y,x)\n")
    code, out, _ = run(capsys, "check-equiv", "--signature", str(tmp_path / "sig.txt"),
                       "--corpus", str(tmp_path / "c.txt"), "--exhaustive", "--max-universe", "2")
    assert code == 0 and "checked 18 " in out


def test_audit_pass_lines(tmp_path, capsys):
    out_file = tmp_path / "r.txt"
    code, _, err = run(capsys, "audit", "--claims", "T1c,T2", "--mode", "exhaustive",
                       "--out", str(out_file))
    assert code == 0
    lines = out_file.read_text().splitlines()
    assert [line.split("\t")[4] for line in lines] == ["VERDICT PASS"] * 2
    assert (tmp_path / "FINDINGS.md").exists()
    assert "T1c:" in err


def test_audit_fail_and_replay(tmp_path, capsys):
    out_file = tmp_path / "r.txt"
    assert run(capsys, "audit", "--claims", "L1b,L2", "--out", str(out_file),
               "--findings", str(tmp_path / "F.md"))[0] == 3
    code, out, _ = run(capsys, "audit", "--replay", str(out_file))
    assert (code, out) == (3, "CLAIM L1b\tREPLAY FAIL\n")


def test_audit_unknown_claim(capsys):
    assert run(capsys, "audit", "--claims", "T9")[0] == 1


def test_audit_stdout_is_deterministic(capsys):
    a = run(capsys, "audit", "--claims", "L1a,L2", "--mode", "random", "--budget", "200", "--seed", "5")
    b = run(capsys, "audit", "--claims", "L1a,L2", "--mode", "random", "--budget", "200", "--seed", "5")
    assert a[:2] == b[:2] and a[1].count("\n") == 2


def test_module_entry_point(files):
    proc = subprocess.run(
        [sys.executable, "-m", "compsem", "eval", "--structure", str(files / "ex1.txt"),
         "--formula", "p(x,y) & q(y,z)"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[-1] == "ENGINES AGREE"
