import io
import subprocess
import sys

import pytest

from ltlrabin import cli


def run(argv, stdin=""):
    out, err = io.StringIO(), io.StringIO()
    code = cli.main(argv, stdin=io.StringIO(stdin), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def run_usage(argv):
    with pytest.raises(SystemExit) as e:
        cli.main(argv, stdin=io.StringIO(""), stdout=io.StringIO(), stderr=io.StringIO())
    return e.value.code


@pytest.mark.parametrize(
    "text,want",
    [("G (a | F b)", "dra=3(2)\ttgdra=2"), ("F (a | b)", "dra=2(1)"), ("!((G F a1) -> (G (b1 -> F b2)))", "dra=3(1)")],
)
def test_stats(text, want):
    code, out, _ = run(["-f", text, "--format", "stats"])
    assert code == 0
    assert want in out


def test_exit_codes():
    assert run(["-f", "a U"])[0] == cli.EXIT_SYNTAX
    assert run(["-f", "G (a U b)"])[0] == cli.EXIT_FRAGMENT
    assert run(["-f", "!(a U b)"])[0] == cli.EXIT_FRAGMENT
    assert run(["-f", "F a & F b & F c", "--cap-states", "2"])[0] == cli.EXIT_CAP
    assert run(["-f", "a", "--stage", "tgdra", "--format", "dstar"])[0] == cli.EXIT_USAGE
    assert run_usage(["--format", "pdf"]) == cli.EXIT_USAGE
    assert run_usage(["--check", "x"]) == cli.EXIT_USAGE


def test_fragment_diagnostic_names_subformula():
    code, _, err = run(["-f", "a U G (b U c)"])
    assert code == cli.EXIT_FRAGMENT
    assert "G (b U c)" in err


def test_check_flag():
    code, _, err = run(["-f", "G (a | F b)", "--check", "2,3", "--format", "stats"])
    assert code == 0
    assert "mismatches=0" in err


def test_batch_mode():
    stdin = "# comment\nG F a\n\nF a & F !a\nG (a U b)\n"
    code, out, err = run(["--format", "stats", "--no-timing"], stdin)
    assert code == cli.EXIT_FRAGMENT
    assert out.splitlines() == ["G F a\tdra=2(1)\ttgdra=1\tvwaa=2", "F a & F !a\tdra=4(1)\ttgdra=4\tvwaa=2"]
    assert "G (a U b)" in err


def test_no_simplify_flags_change_sizes():
    _, full, _ = run(["-f", "G (a | F b)", "--format", "stats", "--no-timing"])
    _, raw, _ = run(
        ["-f", "G (a | F b)", "--format", "stats", "--no-timing", "--no-simplify-states", "--no-simplify-acceptance"]
    )
    assert full != raw


@pytest.mark.parametrize("fmt", ["hoa", "dstar", "dot", "stats"])
def test_deterministic_output(fmt):
    args = ["-f", "F G a | F G b | G F c", "--format", fmt, "--no-timing"]
    assert len({run(args)[1] for _ in range(3)}) == 1


def test_vwaa_dot():
    code, out, _ = run(["-f", "G (X F a & X F b) | G b", "--stage", "vwaa", "--format", "dot"])
    assert code == 0
    assert out.count("[shape=circle") + out.count("[shape=doublecircle") == 4


def test_hoa_tt():
    code, out, _ = run(["-f", "tt"])
    assert code == 0
    assert "States: 1" in out and "[t] 0" in out


def test_console_script():
    proc = subprocess.run(
        [sys.executable, "-m", "ltlrabin.cli", "-f", "G F a", "--format", "stats", "--no-timing"],
        capture_output=True, text=True, check=True,
    )
    assert proc.stdout == "G F a\tdra=2(1)\ttgdra=1\tvwaa=2\n"
