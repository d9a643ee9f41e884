import subprocess
import sys

import pytest

from hawk import corpus
from hawk.cli import main
from hawk.kernel import check_judgment
from hawk.surface import parse

ADD = "def add : N -> N -> N := fun (a b : N) => rec[N] a (fun (r k : N) => S r) b\n"


@pytest.fixture
def write(tmp_path):
    def go(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return go


def test_check_accepts(write, capsys):
    assert main(["check", write("a.haw", "logic lhaw\ntheorem t : 0 = 0 := refl 0\n")]) == 0
    assert "t: accepted" in capsys.readouterr().out


def test_check_rejects_arrow_equality_in_lhaw(write, capsys):
    src = "logic lhaw\ntheorem t (f : N -> N) : f =[N -> N] f := refl f\n"
    assert main(["check", write("a.haw", src)]) == 1
    assert "equality at arrow sort" in capsys.readouterr().out


def test_check_logic_override(write):
    src = "logic lhaw\ntheorem t (f : N -> N) : f =[N -> N] f := refl[N -> N] f\n"
    assert main(["check", write("a.haw", src), "--logic", "lehaw"]) == 0


def test_check_empty_file(write, capsys):
    assert main(["check", write("a.haw", "")]) == 0
    assert "0 theorem(s)" in capsys.readouterr().out


def test_check_parse_error(write, capsys):
    assert main(["check", write("a.haw", "theorem t : 0 = := refl 0")]) == 2
    assert "parse error" in capsys.readouterr().err


def test_check_missing_file(tmp_path):
    assert main(["check", str(tmp_path / "missing.haw")]) == 2


def test_check_machine_format(write, capsys):
    assert main(["check", write("a.haw", "theorem t : 0 = 0 := refl 0\n"), "--format", "machine"]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "t\taccepted\t"


def test_usage_errors():
    assert main([]) == 2
    assert main(["frobnicate"]) == 2
    assert main(["corpus", "--step-budget", "0"]) == 2


def test_translate_ext(write, tmp_path, capsys):
    src = "logic lehaw\ntheorem t (f : N -> N) : f =[N -> N] f := ext[N, N](fun (x : N) => refl (f x))\n"
    out = tmp_path / "out.haw"
    assert main(["translate", write("a.haw", src), "-o", str(out)]) == 0
    sf = parse(out.read_text())
    assert sf.logic == "lhaw" and sf.generated
    [thm] = sf.theorems
    assert [x for x, _ in thm.sig] == ["f#1", "f#2"]
    assert [h for h, _ in thm.ctx] == ["f#pm"]
    assert check_judgment(sf.judgment(thm)).accepted


def test_translate_lhaw_corpus(tmp_path):
    src = tmp_path / "src.haw"
    src.write_text(corpus.read("lhaw.haw"))
    out = tmp_path / "out.haw"
    assert main(["translate", str(src), "-o", str(out)]) == 0
    sf = parse(out.read_text())
    assert len(sf.theorems) == len(corpus.load("lhaw.haw").theorems)


def test_translate_rejected_source_writes_nothing(write, tmp_path):
    out = tmp_path / "out.haw"
    assert main(["translate", write("a.haw", "theorem t : 0 = 1 := refl 0\n"), "-o", str(out)]) == 1
    assert not out.exists()


def test_normalize_with_definitions(write, capsys):
    assert main(["normalize", "-e", "add 2 3", "--defs", write("d.haw", ADD)]) == 0
    assert capsys.readouterr().out.startswith("S (S (S (S (S 0))))")


def test_normalize_examples(capsys):
    assert main(["normalize", "-e", "0"]) == 0
    assert capsys.readouterr().out.startswith("0")
    assert main(["normalize", "-e", "(fun (x:N) => x) 0", "--trace"]) == 0
    out = capsys.readouterr().out
    assert "beta at root" in out and out.splitlines()[-1].startswith("0")


def test_normalize_errors():
    assert main(["normalize", "-e", "fun"]) == 2
    assert main(["normalize", "-e", "0 0"]) == 2


def test_normalize_step_budget(write, capsys):
    assert main(["normalize", "-e", "add 9 9", "--defs", write("d.haw", ADD), "--step-budget", "2"]) == 1


def test_step_budget_environment(monkeypatch):
    monkeypatch.setenv("HAWK_STEP_BUDGET", "nope")
    assert main(["normalize", "-e", "0"]) == 2


def test_corpus_filter_runs_one_item(capsys):
    assert main(["corpus", "--filter", "peano4", "--format", "machine"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 1
    name, logic, chk, tr, ms = lines[0].split("\t")
    assert (name, logic, chk, tr) == ("peano4", "lhaw", "check=ok", "translate=ok")
    assert ms.startswith("ms=")


def test_corpus_filter_without_match():
    assert main(["corpus", "--filter", "no-such-item"]) == 2


def test_conjecture_command(capsys, tmp_path):
    p = tmp_path / "c.haw"
    p.write_text(corpus.read("conjecture.haw"))
    assert main(["conjecture", str(p)]) == 0
    out = capsys.readouterr().out
    assert "errors=0" in out and "not joinable" not in out


def test_conjecture_peel_is_skipped(write, capsys):
    src = "logic lhaw\ntheorem t : 0 = 0 := peel[N, 0, 0](refl 0, z. z = 0, refl 0)\n"
    assert main(["conjecture", write("c.haw", src)]) == 0
    assert "excluded by conjecture hypothesis" in capsys.readouterr().out


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "hawk", "normalize", "-e", "S 0"], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.startswith("S 0")


def test_closed_stdout_is_not_a_crash():
    p = subprocess.Popen([sys.executable, "-m", "hawk", "corpus", "--filter", "witness:*"],
                         stdout=subprocess.PIPE, stderr=subprocess.PIPE)
    p.stdout.readline()
    p.stdout.close()
    err = p.stderr.read().decode()
    assert p.wait(timeout=30) == 1
    assert "Traceback" not in err
