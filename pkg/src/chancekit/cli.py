"""``chancekit`` command line: every pipeline over JSON input files.

Output is one JSON document ``{"schema", "kind", "payload", "provenance"}``.
Exact numbers are ``"p/q"`` strings; every decimal sits next to the exact
value it was rendered from.  Exit codes: 0 success, 2 invalid input,
3 computational failure (including infinite moments and failed verifications).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from fractions import Fraction
from math import ceil, floor, gcd, lcm

from . import __version__
from .exact.poly import Poly
from .exact.ratfunc import RationalFunction
from .exact.rational import RationalParseError, format_decimal, format_rational, parse_rational
from .exact.resultant import EliminationError
from .fit import fit_algebraic, fit_cfinite, fit_precursive
from .io import load_board, load_data, load_general_die, load_positive_die, read_bytes
from .markov import (
    ComputationError,
    GameStats,
    InfiniteMomentError,
    ValidationError,
    build_board_process,
    moments_by_linear_solve,
    process_win_bracket,
    solve_duration_pgfs,
    win_prob_exact,
)
from .montecarlo import simulate_board, simulate_two_player, simulate_walk
from .numeric import truncated_pgf, truncated_pgf_until
from .piles import RecurrenceNotFound, asymptotic_moments, win_prob_recurrence, win_probability
from .ruin import (
    DEFAULT_P,
    load_fixtures,
    moment_stats,
    pgf_algebraic_equation,
    reach_m_expectation,
    verify_twoplayer_recurrence,
)

SCHEMA = "chancekit-output/1"
EXIT_OK, EXIT_INVALID, EXIT_FAILED = 0, 2, 3


class VerificationFailed(ComputationError):
    """A check ran to completion and did not pass; the payload is still emitted."""

    def __init__(self, message: str, result: dict):
        super().__init__(message)
        self.result = result


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------


class Renderer:
    def __init__(self, digits: int = 12):
        self.digits = digits

    def q(self, x) -> str:
        return format_rational(x)

    def dec(self, x) -> str:
        return format_decimal(x, self.digits)

    def number(self, x) -> dict:
        """Exact value with its decimal rendering."""
        return {"exact": self.q(x), "decimal": self.dec(x)}

    def coeffs(self, p: Poly) -> list[str]:
        return [self.q(c) for c in p.coeffs]


def render_poly(p: Poly, var: str = "n") -> str:
    """``2/3 n + 2/9`` style: highest degree first, rational coefficients before the variable."""
    parts = []
    for k in range(p.degree, -1, -1):
        c = p[k]
        if not c:
            continue
        mono = "" if k == 0 else var if k == 1 else f"{var}^{k}"
        a = abs(c)
        body = mono if mono and a == 1 else f"{format_rational(a)} {mono}".strip()
        parts.append(("-" if c < 0 else "+", body))
    if not parts:
        return "0"
    head = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    return " ".join([head] + [f"{s} {b}" for s, b in parts[1:]])


def integer_triples(triples) -> list[tuple[int, int, int]]:
    """Scale ``(i, j, c)`` terms to coprime integers, highest ``(i, j)`` term positive."""
    den = lcm(*(Fraction(c).denominator for _, _, c in triples))
    ints = [(i, j, int(Fraction(c) * den)) for i, j, c in triples]
    g = 0
    for *_, c in ints:
        g = gcd(g, c)
    lead = max(ints)[2]
    g = g if lead > 0 else -g
    return sorted(((i, j, c // g) for i, j, c in ints), key=lambda e: (-e[0], -e[1]))


def render_bivariate(triples, f: str = "f", t: str = "t") -> str:
    """``t*f^2 - f + 1`` style, ordered by descending power of ``f``."""
    parts = []
    for i, j, c in sorted(triples, key=lambda e: (-e[0], -e[1])):
        c = Fraction(c)
        monos = [x for x in ((t if j == 1 else f"{t}^{j}") if j else "", (f if i == 1 else f"{f}^{i}") if i else "") if x]
        a = abs(c)
        if monos and a == 1:
            body = "*".join(monos)
        else:
            body = "*".join([format_rational(a)] + monos)
        parts.append(("-" if c < 0 else "+", body))
    if not parts:
        return "0"
    head = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    return " ".join([head] + [f"{s} {b}" for s, b in parts[1:]])


def _stats_payload(r: Renderer, st: GameStats) -> dict:
    out = {
        "expectation": r.number(st.expectation),
        "raw_moments": [r.q(x) for x in st.raw_moments],
        "central_moments": [r.q(x) for x in st.central_moments],
    }
    if st.variance is not None:
        out["variance"] = r.number(st.variance)
        out["standard_deviation"] = {"of": "sqrt(variance)", "decimal": r.dec(st.standard_deviation())}
    if st.skewness() is not None:
        out["skewness"] = {"of": "central_moments[3]/variance^(3/2)", "decimal": r.dec(st.skewness())}
    if st.kurtosis() is not None:
        out["kurtosis"] = r.number(st.central_moments[4] / st.variance**2)
    return out


def round_outward(lo: Fraction, hi: Fraction, places: int = 30) -> tuple[Fraction, Fraction]:
    """Widen ``[lo, hi]`` to endpoints on the ``10**-places`` grid (keeps the bracket certified)."""
    scale = 10**places
    return Fraction(floor(lo * scale), scale), Fraction(ceil(hi * scale), scale)


def _integer_normalized(f: RationalFunction) -> tuple[Poly, Poly]:
    """``num/den`` rescaled so ``den`` has coprime integer coefficients and ``den(0) > 0``."""
    den = f.den.primitive()
    if den[0] < 0:
        den = -den
    scale = den[0] / f.den[0] if f.den[0] else den.lc() / f.den.lc()
    return f.num * scale, den


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def _state(m, v: int) -> int:
    if not 1 <= v < m.state_count:
        raise ValidationError(f"--state: must be a transient state in 1..{m.state_count - 1}")
    return v


def cmd_board(a, r: Renderer) -> tuple[str, dict]:
    spec = load_board(a.board, a.duplicates)
    m = build_board_process(spec)
    v = _state(m, a.state)
    if a.action == "pgf":
        f = solve_duration_pgfs(m)[v - 1]
        num, den = _integer_normalized(f)
        return "board.pgf", {
            "state": v,
            "num": r.coeffs(num),
            "den": r.coeffs(den),
            "monic": {"num": r.coeffs(f.num), "den": r.coeffs(f.den)},
            "text": f"({num.to_str('t')}) / ({den.to_str('t')})",
        }
    if a.action == "moments":
        st = moments_by_linear_solve(m, a.moment_order)[v - 1]
        return "board.moments", {"state": v, "order": a.moment_order, **_stats_payload(r, st)}
    if a.exact:
        f = solve_duration_pgfs(m)[v - 1]
        w = win_prob_exact(f)
        return "board.winprob", {"state": v, "mode": "exact", "win_prob": r.q(w), "decimal": r.dec(w)}
    br = process_win_bracket(m, parse_rational(a.eps), v, v)
    lo, hi = round_outward(br.lower, br.upper)
    return "board.winprob", {
        "state": v,
        "mode": "bracket",
        "eps": r.q(parse_rational(a.eps)),
        "lower": r.number(lo),
        "upper": r.number(hi),
        "width": r.number(hi - lo),
        "rounds": br.K,
    }


def cmd_pile(a, r: Renderer) -> tuple[str, dict]:
    die = load_positive_die(a.die)
    if a.action == "moments":
        raw, central = asymptotic_moments(die, a.order)
        rows = []
        for k in range(1, a.order + 1):
            rp, cp = raw[k].poly_part, central[k].poly_part
            rows.append({
                "order": k,
                "raw": {"coeffs": r.coeffs(rp), "text": render_poly(rp)},
                "central": {"coeffs": r.coeffs(cp), "text": render_poly(cp)},
            })
        return "pile.moments", {"variable": "n", "moments": rows, "poly": rows[0]["raw"]["text"]}
    if a.action == "winprob":
        if a.goal < 1:
            raise ValidationError("--goal: must be at least 1")
        w = win_probability(die, a.goal)
        return "pile.winprob", {"goal": a.goal, "a": r.q(2 * w - 1), "win_prob": r.q(w), "decimal": r.dec(w)}
    rec = win_prob_recurrence(die, a.terms)
    return "pile.recurrence", {
        "offset": rec.offset,
        "order": rec.order,
        "polys": [r.coeffs(p) for p in rec.polys],
        "initial": [r.q(x) for x in rec.initial],
        "text": rec.to_str(),
    }


def cmd_ruin(a, r: Renderer) -> tuple[str, dict]:
    if a.action == "verify-fixtures":
        return _verify_fixtures(a, r)
    die = load_general_die(a.die)
    if a.action == "equation":
        pgf = pgf_algebraic_equation(die)
        tri = integer_triples(pgf.equation.poly.triples())
        return "ruin.equation", {
            "triples": [[i, j, str(c)] for i, j, c in tri],
            "text": render_bivariate(tri),
            "deg_f": max(i for i, _, _ in tri),
            "deg_t": max(j for _, j, _ in tri),
        }
    if a.action == "moment-poly":
        res = moment_stats(die, a.order, a.conditional)
        rows = []
        for mp in res:
            rows.append({
                "order": mp.order,
                "poly": mp.int_coeffs(),
                "root_interval": [r.q(mp.isolated_root.lo), r.q(mp.isolated_root.hi)],
                "root": r.dec(mp.isolated_root.mid),
            })
        return "ruin.moment-poly", {"conditional": a.conditional, **rows[-1], "all": rows}
    if a.action == "truncate":
        if a.goal < 1:
            raise ValidationError("--goal: must be at least 1")
        if a.eps is not None:
            tp = truncated_pgf_until(die, a.goal, parse_rational(a.eps))
        else:
            tp = truncated_pgf(die, a.goal, a.terms)
        if not tp.captured_mass:
            raise ComputationError("no walk finished within the truncation; increase --terms")
        out = {
            "goal": a.goal,
            "terms": tp.K,
            "captured_mass": r.number(tp.captured_mass),
            "tail": r.number(tp.tail),
            "conserved": tp.conserved(),
            "conditional_moments": [r.number(tp.conditional_moment(j)) for j in range(1, a.order + 1)],
        }
        if a.show_coeffs:
            out["coeffs"] = [r.q(c) for c in tp.coeffs]
        return "ruin.truncate", out
    # reach
    if a.goal < 1:
        raise ValidationError("--goal: must be at least 1")
    res = reach_m_expectation(die, a.goal, parse_rational(a.tail))
    out = {"goal": a.goal, "exact": res.exact is not None, "tail": r.number(res.tail)}
    if res.exact is not None:
        mp = res.exact
        out.update(poly=mp.int_coeffs(), root_interval=[r.q(mp.isolated_root.lo), r.q(mp.isolated_root.hi)],
                   expectation={"decimal": r.dec(mp.isolated_root.mid)})
        if mp.annihilating_poly.degree == 1:
            out["expectation"] = r.number(res.value)
    else:
        out.update(expectation=r.number(res.value), rounds=res.rounds)
    return "ruin.reach", out


def _verify_fixtures(a, r: Renderer) -> tuple[str, dict]:
    fixtures = load_fixtures()
    ids = [a.fixture] if a.fixture else sorted(fixtures)
    if a.p is not None and not a.fixture:
        raise ValidationError("--p requires --fixture")
    reports = []
    for fid in ids:
        if fid not in fixtures:
            raise ValidationError(f"--fixture: unknown id {fid!r}; known: {', '.join(sorted(fixtures))}")
        p = parse_rational(a.p) if a.p is not None else DEFAULT_P[fid]
        rep = verify_twoplayer_recurrence(fid, p, (a.m_from, a.m_to), tol=a.tol)
        reports.append({
            "fixture": fid,
            "p": r.q(p),
            "m_range": [a.m_from, a.m_to],
            "max_residual": f"{rep.max_residual:.3e}",
            "initial_errors": {str(m): f"{e:.3e}" for m, e in rep.initial_errors},
            "ok": rep.ok,
        })
    payload = {"tolerance": f"{a.tol:g}", "fixtures": reports, "ok": all(x["ok"] for x in reports)}
    if not payload["ok"]:
        raise VerificationFailed("fixture verification failed", {"kind": "ruin.verify-fixtures", "payload": payload})
    return "ruin.verify-fixtures", payload


def _largest_precursive_order(n: int, d: int, cap: int = 6) -> int:
    """Largest order whose unknown count leaves room for the holdout terms."""
    best = 1
    for L in range(1, cap + 1):
        if (L + 1) * (d + 1) + L + 6 <= n:
            best = L
    return best


def cmd_guess(a, r: Renderer) -> tuple[str, dict]:
    data = load_data(a.data)
    if a.action == "cfinite":
        max_order = a.max_order if a.max_order is not None else max(1, (len(data) - 4) // 2)
        rec = fit_cfinite(data, max_order)
        if rec is None:
            raise RecurrenceNotFound(f"no C-finite recurrence of order <= {max_order}")
        num, den = _integer_normalized(rec.to_rational_function())
        return "guess.cfinite", {
            "order": rec.order,
            "coeffs": [r.q(c) for c in rec.coeffs],
            "start": rec.start,
            "text": rec.to_str(),
            "generating_function": {"num": r.coeffs(num), "den": r.coeffs(den)},
        }
    if a.action == "precursive":
        max_order = a.max_order or _largest_precursive_order(len(data), a.max_degree)
        rec = fit_precursive(data, max_order, a.max_degree, offset=a.offset)
        if rec is None:
            raise RecurrenceNotFound(f"no P-recurrence of order <= {max_order}, degree <= {a.max_degree}")
        return "guess.precursive", {
            "offset": rec.offset,
            "order": rec.order,
            "polys": [r.coeffs(p) for p in rec.polys],
            "text": rec.to_str(),
        }
    eq = fit_algebraic(data, a.max_deg_f, a.max_deg_t)
    if eq is None:
        raise RecurrenceNotFound(f"no algebraic equation with deg_f <= {a.max_deg_f}, deg_t <= {a.max_deg_t}")
    tri = integer_triples(eq.poly.triples())
    return "guess.algebraic", {"triples": [[i, j, str(c)] for i, j, c in tri], "text": render_bivariate(tri)}


def cmd_simulate(a, r: Renderer) -> tuple[str, dict]:
    if a.action == "board":
        m = build_board_process(load_board(a.board, a.duplicates))
        rep = (simulate_two_player if a.two_player else simulate_board)(m, a.trials, a.seed)
    else:
        rep = simulate_walk(load_general_die(a.die), a.goal, a.trials, a.seed, a.cap)
    out = rep.as_dict()
    # exact tallies as strings; summary statistics are derived from them
    out["total"], out["total_sq"] = str(rep.total), str(rep.total_sq)
    for k in ("mean", "sample_std", "std_error", "win_rate", "win_std_error"):
        if out[k] is not None:
            out[k] = r.dec(out[k])
    return f"simulate.{a.action}", out


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _positive(s: str) -> int:
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="chancekit", description="Exact analysis of games of pure chance.")
    ap.add_argument("--version", action="version", version=f"chancekit {__version__}")
    ap.add_argument("--digits", type=_positive, default=12, help="significant digits of decimal renderings")
    ap.add_argument("--indent", type=int, default=2, help="JSON indentation (negative for compact output)")
    sub = ap.add_subparsers(dest="command", required=True)

    b = sub.add_parser("board", help="absorbing-Markov board games")
    b.add_argument("action", choices=["pgf", "moments", "winprob"])
    b.add_argument("--board", required=True, metavar="FILE")
    b.add_argument("--state", type=_positive, default=1, metavar="V")
    b.add_argument("--moment-order", type=_positive, default=2, metavar="K")
    b.add_argument("--duplicates", choices=["error", "first", "last"], default=None,
                   help="resolution of several jumps leaving one square (default: from the file, else error)")
    g = b.add_mutually_exclusive_group()
    g.add_argument("--exact", action="store_true", help="exact rational win probability")
    g.add_argument("--eps", default="1/10000000", metavar="E", help="tail bound of the certified bracket")
    b.set_defaults(func=cmd_board)

    p = sub.add_parser("pile", help="positive-step pile games")
    p.add_argument("action", choices=["moments", "winprob", "recurrence"])
    p.add_argument("--die", required=True, metavar="FILE")
    p.add_argument("--goal", type=int, default=1, metavar="N")
    p.add_argument("--order", type=_positive, default=2, metavar="K")
    p.add_argument("--terms", type=_positive, default=40, metavar="T")
    p.set_defaults(func=cmd_pile)

    w = sub.add_parser("ruin", help="gambler's-ruin walks with unlimited credit")
    w.add_argument("action", choices=["equation", "moment-poly", "truncate", "reach", "verify-fixtures"])
    w.add_argument("--die", metavar="FILE")
    w.add_argument("--goal", type=int, default=1, metavar="M")
    w.add_argument("--terms", type=_positive, default=400, metavar="K")
    w.add_argument("--eps", default=None, metavar="E", help="truncate: run until the tail is at most E")
    w.add_argument("--order", type=_positive, default=1, metavar="J")
    w.add_argument("--conditional", action="store_true", help="moments conditioned on reaching the goal")
    w.add_argument("--tail", default="1/1000000000000", help="reach: admissible unfinished mass")
    w.add_argument("--show-coeffs", action="store_true")
    w.add_argument("--fixture", metavar="ID")
    w.add_argument("--p", default=None)
    w.add_argument("--m-from", type=_positive, default=1)
    w.add_argument("--m-to", type=_positive, default=15)
    w.add_argument("--tol", type=float, default=1e-8)
    w.set_defaults(func=cmd_ruin)

    q = sub.add_parser("guess", help="fit recurrences and algebraic equations to data")
    q.add_argument("action", choices=["cfinite", "precursive", "algebraic"])
    q.add_argument("--data", required=True, metavar="FILE")
    q.add_argument("--max-order", type=_positive, default=None)
    q.add_argument("--max-degree", type=int, default=2)
    q.add_argument("--offset", type=int, default=0)
    q.add_argument("--max-deg-f", type=_positive, default=2)
    q.add_argument("--max-deg-t", type=_positive, default=2)
    q.set_defaults(func=cmd_guess)

    s = sub.add_parser("simulate", help="seeded Monte Carlo cross-checks")
    s.add_argument("action", choices=["board", "walk"])
    s.add_argument("--board", metavar="FILE")
    s.add_argument("--die", metavar="FILE")
    s.add_argument("--duplicates", choices=["error", "first", "last"], default=None)
    s.add_argument("--two-player", action="store_true")
    s.add_argument("--goal", type=_positive, default=1)
    s.add_argument("--trials", type=_positive, default=100_000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--cap", type=_positive, default=10_000, help="walk: rounds before a trial is censored")
    s.set_defaults(func=cmd_simulate)
    return ap


def _inputs(a) -> list[str]:
    return [getattr(a, k) for k in ("board", "die", "data") if getattr(a, k, None)]


def _require(a) -> None:
    need = {
        ("ruin", "equation"): "die", ("ruin", "moment-poly"): "die", ("ruin", "truncate"): "die",
        ("ruin", "reach"): "die", ("simulate", "board"): "board", ("simulate", "walk"): "die",
    }.get((a.command, a.action))
    if need and not getattr(a, need):
        raise ValidationError(f"{a.command} {a.action}: --{need} FILE is required")


def _document(kind: str, payload: dict, a) -> dict:
    return {
        "schema": SCHEMA,
        "kind": kind,
        "payload": payload,
        "provenance": {
            "version": __version__,
            "inputs": {path: hashlib.sha256(read_bytes(path)).hexdigest() for path in _inputs(a)},
            "argv": list(a.argv),
        },
    }


def _emit(doc: dict, a) -> None:
    indent = None if a.indent < 0 else a.indent
    sys.stdout.write(json.dumps(doc, indent=indent) + "\n")


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    a = build_parser().parse_args(argv)
    a.argv = argv
    r = Renderer(a.digits)
    try:
        _require(a)
        kind, payload = a.func(a, r)
        _emit(_document(kind, payload, a), a)
        return EXIT_OK
    except VerificationFailed as e:
        _emit(_document(e.result["kind"], e.result["payload"], a), a)
        print(f"chancekit: {e}", file=sys.stderr)
        return EXIT_FAILED
    except (ComputationError, InfiniteMomentError, RecurrenceNotFound, EliminationError, ArithmeticError) as e:
        print(f"chancekit: computation failed: {e}", file=sys.stderr)
        return EXIT_FAILED
    except (ValidationError, RationalParseError, ValueError, OSError) as e:
        print(f"chancekit: invalid input: {e}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
