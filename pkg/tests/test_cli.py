"""The ``chancekit`` command line: JSON documents, round trips against the API, exit codes."""

from __future__ import annotations

import json
import subprocess
import sys
from fractions import Fraction

import pytest

from chancekit import __version__
from chancekit.cli import main
from chancekit.exact import Poly, RationalFunction
from chancekit.markov import moments_by_linear_solve, solve_duration_pgfs


def run(capsys, *argv):
    code = main(["--indent", "-1", *argv])
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), err


def ok(capsys, *argv):
    code, doc, err = run(capsys, *argv)
    assert code == 0, err
    assert doc["schema"] == "chancekit-output/1"
    assert doc["provenance"]["version"] == __version__
    return doc["payload"]


def Q(s: str) -> Fraction:
    return Fraction(s)


# ---------------------------------------------------------------------------
# board
# ---------------------------------------------------------------------------


def test_board_pgf_round_trip(capsys, toy_process):
    p = ok(capsys, "board", "pgf", "--board", "toy.json")
    f = RationalFunction(Poly([Q(c) for c in p["num"]]), Poly([Q(c) for c in p["den"]]))
    assert f == solve_duration_pgfs(toy_process)[0]
    assert p["den"] == ["4", "-2", "-1"]


def test_board_moments_round_trip(capsys, toy_process):
    p = ok(capsys, "board", "moments", "--board", "toy.json", "--moment-order", "4")
    st = moments_by_linear_solve(toy_process, 4)[0]
    assert [Q(x) for x in p["raw_moments"]] == list(st.raw_moments)
    assert p["expectation"] == {"exact": "15/2", "decimal": "7.5"}
    assert Q(p["variance"]["exact"]) == Fraction(89, 4)
    assert "skewness" in p and "kurtosis" in p


def test_board_winprob_exact_and_bracket(capsys):
    assert ok(capsys, "board", "winprob", "--board", "toy.json", "--exact")["win_prob"] == "11/20"
    p = ok(capsys, "board", "winprob", "--board", "toy.json", "--eps", "1/1000000")
    assert Q(p["lower"]["exact"]) <= Fraction(11, 20) <= Q(p["upper"]["exact"])
    assert Q(p["width"]["exact"]) <= Fraction(1, 10**6)


def test_board_state_validation(capsys):
    code, _, err = run(capsys, "board", "moments", "--board", "toy.json", "--state", "99")
    assert code == 2 and "--state" in err


def test_provenance_hashes_inputs(capsys):
    code, doc, _ = run(capsys, "board", "winprob", "--board", "toy.json", "--exact")
    (name, digest), = doc["provenance"]["inputs"].items()
    assert name == "toy.json" and len(digest) == 64
    assert doc["provenance"]["argv"][-3:] == ["--board", "toy.json", "--exact"]


# ---------------------------------------------------------------------------
# pile, ruin, guess
# ---------------------------------------------------------------------------


def test_pile_commands(capsys):
    p = ok(capsys, "pile", "moments", "--die", "fair12.json", "--order", "4")
    assert p["poly"] == "2/3 n + 2/9"
    assert p["moments"][3]["central"]["text"] == "4/243 n^2 + 2/243 n - 62/2187"
    assert ok(capsys, "pile", "winprob", "--die", "fair12.json", "--goal", "4")["win_prob"] == "47/64"
    assert ok(capsys, "pile", "recurrence", "--die", "fair12.json", "--terms", "40")["order"] == 4


def test_ruin_moment_poly(capsys):
    p = ok(capsys, "ruin", "moment-poly", "--die", "minus1plus2_fair.json")
    assert p["poly"] == [-4, -2, 1]
    lo, hi = (Q(x) for x in p["root_interval"])
    quad = lambda x: x * x - 2 * x - 4
    assert quad(lo) * quad(hi) <= 0 and hi - lo < Fraction(1, 10**20)
    assert abs(float(p["root"]) - (1 + 5**0.5)) < 1e-10


def test_ruin_truncate_and_reach(capsys):
    p = ok(capsys, "ruin", "truncate", "--die", "minus1plus2_fair.json", "--goal", "5", "--eps", "1/1000000000000")
    assert Q(p["tail"]["exact"]) <= Fraction(1, 10**12)
    r = ok(capsys, "ruin", "reach", "--die", "minus1plus2_fair.json", "--goal", "5")
    assert abs(float(r["expectation"]["decimal"]) - 10.83282) < 1e-5


def test_ruin_verify_fixture(capsys):
    p = ok(capsys, "ruin", "verify-fixtures", "--fixture", "plus1-minus2", "--m-to", "10")
    assert p["ok"] is True


def test_ruin_p_requires_fixture(capsys):
    code, _, _ = run(capsys, "ruin", "verify-fixtures", "--p", "3/4")
    assert code == 2


def test_guess_commands(capsys):
    p = ok(capsys, "guess", "cfinite", "--data", "fib.json")
    assert p["order"] == 2 and p["generating_function"] == {"num": ["0", "1"], "den": ["1", "-1", "-1"]}
    assert ok(capsys, "guess", "algebraic", "--data", "catalan.json")["text"] == "t*f^2 - f + 1"
    assert ok(capsys, "guess", "precursive", "--data", "catalan.json")["order"] == 1


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------


def test_simulate_deterministic(capsys):
    a = ok(capsys, "simulate", "board", "--board", "toy.json", "--trials", "3000", "--seed", "9")
    b = ok(capsys, "simulate", "board", "--board", "toy.json", "--trials", "3000", "--seed", "9")
    assert a == b and int(a["total"]) > 0
    w = ok(capsys, "simulate", "walk", "--die", "minus1plus2_fair.json", "--trials", "2000")
    assert w["censored"] == 0


# ---------------------------------------------------------------------------
# errors and global flags
# ---------------------------------------------------------------------------


@pytest.fixture
def bad_files(tmp_path):
    files = {
        "zero_den": {"faces": [{"step": 1, "prob": "1/0"}, {"step": -1, "prob": "1"}]},
        "bad_sum": {"faces": [{"step": 1, "prob": "1/2"}, {"step": -1, "prob": "1/3"}]},
        "zero_drift": {"faces": [{"step": 1, "prob": "1/2"}, {"step": -1, "prob": "1/2"}]},
    }
    out = {}
    for name, doc in files.items():
        path = tmp_path / f"{name}.json"
        path.write_text(json.dumps(doc))
        out[name] = str(path)
    broken = tmp_path / "broken.json"
    broken.write_text('{"faces": [\n  {"step": 1,, }]}')
    out["broken"] = str(broken)
    return out


@pytest.mark.parametrize("key,code,needle", [
    ("zero_den", 2, "1/0"),
    ("bad_sum", 2, "sum to 1"),
    ("broken", 2, "line 2"),
    ("zero_drift", 3, "infinite"),
])
def test_exit_codes(capsys, bad_files, key, code, needle):
    got, doc, err = run(capsys, "ruin", "moment-poly", "--die", bad_files[key])
    assert got == code and doc is None
    assert needle in err


def test_missing_file(capsys):
    code, _, err = run(capsys, "board", "pgf", "--board", "/nonexistent/board.json")
    assert code == 2 and "not found" in err


def test_missing_required_die(capsys):
    code, _, err = run(capsys, "ruin", "truncate")
    assert code == 2 and "--die" in err


def test_indent_and_digits(capsys):
    main(["--indent", "4", "--digits", "5", "board", "moments", "--board", "toy.json"])
    out = capsys.readouterr().out
    assert out.startswith("{\n    ")
    assert json.loads(out)["payload"]["standard_deviation"]["decimal"] == "4.7170"


def test_version_and_console_script():
    res = subprocess.run([sys.executable, "-m", "chancekit", "--version"], capture_output=True, text=True)
    assert res.returncode == 0 and __version__ in res.stdout
