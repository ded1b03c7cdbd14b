"""Two-player races to ``m`` dollars with steps {+1 w.p. p, -k w.p. 1-p}.

The player to move wins with probability ``(1 + f(m)) / 2`` where
``f(m) = sum_n b_{n,m}**2`` and ``b_{n,m}`` is the probability of first
reaching ``m`` after ``n`` losing rounds.  Linear recurrences for ``f`` are
stored as fixtures (with transcription checksums) and verified numerically.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources

import mpmath
import sympy

from ..markov import ValidationError

FIXTURE_FILE = "twoplayer_recurrences.json"
DEFAULT_DPS = 40
# probability at which each fixture is checked when none is given
DEFAULT_P = {
    "pm1-fair": Fraction(1, 2),
    "pm1-loaded": Fraction(3, 4),
    "plus1-minus2": Fraction(3, 4),
    "plus1-minus3": Fraction(4, 5),
    "plus1-minus4": Fraction(9, 10),
    "plus1-minus5": Fraction(9, 10),
}


class FixtureChecksumError(ValueError):
    pass


@dataclass(frozen=True)
class RecurrenceFixture:
    """``sum_i c_i(m, p) f(m + shifts[i]) = rhs``."""

    id: str
    up: int
    down: int
    domain: str
    shifts: tuple[int, ...]
    coefficients: tuple[str, ...]
    rhs: str
    initial: dict
    checksum: str

    def canonical(self) -> str:
        return json.dumps({"shifts": list(self.shifts), "coefficients": list(self.coefficients), "rhs": self.rhs},
                          sort_keys=True)

    def verify_checksum(self) -> None:
        if hashlib.sha256(self.canonical().encode()).hexdigest() != self.checksum:
            raise FixtureChecksumError(f"fixture {self.id}: transcription checksum mismatch")

    def coefficient_values(self, m: int, p) -> list[Fraction]:
        msym, psym = sympy.symbols("m p")
        p = sympy.Rational(Fraction(p).numerator, Fraction(p).denominator)
        out = []
        for expr in self.coefficients:
            v = sympy.sympify(expr).subs({msym: m, psym: p})
            v = sympy.Rational(v)
            out.append(Fraction(int(v.p), int(v.q)))
        return out

    def rhs_value(self, ctx=mpmath.mp):
        return _mp_eval(self.rhs, ctx)


def _mp_eval(expr: str, ctx=mpmath.mp):
    e = sympy.sympify(expr)
    return ctx.mpf(sympy.N(e, ctx.dps + 5).__str__())


def load_fixtures() -> dict[str, RecurrenceFixture]:
    raw = json.loads(resources.files("chancekit.data").joinpath(FIXTURE_FILE).read_text())
    out = {}
    for e in raw["fixtures"]:
        fx = RecurrenceFixture(e["id"], e["up"], e["down"], e["domain"], tuple(e["shifts"]),
                               tuple(e["coefficients"]), e["rhs"], dict(e.get("initial", {})), e["checksum"])
        fx.verify_checksum()
        out[fx.id] = fx
    return out


# ---------------------------------------------------------------------------
# f(m) = sum_n b_{n,m}**2
# ---------------------------------------------------------------------------


def _hyper_sum_pm1(m: int, p: Fraction, ctx):
    """``sum_n b_{n,m}**2`` for {+1, -1} as a 4F3 at ``16 p**2 (1-p)**2``:
    ``b_{n,m} = p**m (4p(1-p))**n (m/2)_n ((m+1)/2)_n / (n! (m+1)_n)``."""
    if p == Fraction(1, 2):
        return _fair_pm1_sum(m, ctx)
    pp = ctx.mpf(p.numerator) / p.denominator
    z = 16 * pp**2 * (1 - pp) ** 2
    a, b = ctx.mpf(m) / 2, ctx.mpf(m + 1) / 2
    return pp ** (2 * m) * ctx.hyper([a, a, b, b], [m + 1, m + 1, 1], z)


def _fair_pm1_sum(m: int, ctx):
    """At ``p = 1/2`` the 4F3 sits on its unit circle and its terms decay like ``n**-3``.

    The terms peak near ``n ~ m**2 / 6``; they are summed exactly (term ratio)
    well past the peak, and the remaining smooth tail, whose terms expand in
    integer powers of ``1/n``, is added by Euler-Maclaurin summation.
    """
    N = 4 * m * m + 64
    b = ctx.mpf(2) ** (-m)
    head = b * b
    for n in range(N - 1):
        b *= ctx.mpf((m + 2 * n) * (m + 1 + 2 * n)) / (4 * (n + 1) * (m + 1 + n))
        head += b * b
    lm, l2 = ctx.log(m), ctx.log(2)

    def term(j):
        n = N + j
        L = 2 * n + m
        return ctx.exp(2 * (lm - ctx.log(L) + ctx.loggamma(L + 1) - ctx.loggamma(n + 1)
                            - ctx.loggamma(n + m + 1) - L * l2))

    return head + ctx.nsum(term, [0, ctx.inf], method="euler-maclaurin")


def _direct_sum(k: int, m: int, p: Fraction, ctx):
    """Direct summation of ``b_{n,m}**2 = (m/L C(L, n) p**(kn+m) (1-p)**n)**2``, ``L = (k+1)n + m``."""
    pp = ctx.mpf(p.numerator) / p.denominator
    lp, lq = ctx.log(pp), ctx.log(1 - pp)
    total = ctx.mpf(0)
    eps = ctx.mpf(10) ** (-ctx.dps - 3)
    n = 0
    small = 0
    while True:
        L = (k + 1) * n + m
        logb = (ctx.log(m) - ctx.log(L) + ctx.loggamma(L + 1) - ctx.loggamma(n + 1) - ctx.loggamma(L - n + 1)
                + (k * n + m) * lp + n * lq)
        term = ctx.exp(2 * logb)
        total += term
        small = small + 1 if term < eps * total else 0
        if small > 20:
            return total
        n += 1
        if n > 10**6:
            raise ArithmeticError("series did not converge")


def f_value(k: int, m: int, p, dps: int = DEFAULT_DPS):
    """``f(m)`` to ``dps`` digits (mpmath)."""
    p = Fraction(p)
    if m < 1:
        raise ValueError("m must be at least 1")
    with mpmath.workdps(dps):
        if k == 1:
            return _hyper_sum_pm1(m, p, mpmath.mp)
        if p <= Fraction(k, k + 1):
            raise ValidationError(f"direct summation needs p > {k}/{k + 1}")
        return _direct_sum(k, m, p, mpmath.mp)


def win_probability(k: int, m: int, p, dps: int = DEFAULT_DPS):
    return (1 + f_value(k, m, p, dps)) / 2


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FixtureReport:
    fixture: str
    p: Fraction
    m_range: tuple[int, int]
    residuals: tuple[tuple[int, float], ...]  # (m, relative residual)
    tol: float
    initial_errors: tuple[tuple[int, float], ...] = ()

    @property
    def max_residual(self) -> float:
        return max((r for _, r in self.residuals), default=0.0)

    @property
    def ok(self) -> bool:
        return self.max_residual < self.tol and all(e < self.tol for _, e in self.initial_errors)


def verify_twoplayer_recurrence(which: str, p, m_range: tuple[int, int], tol: float = 1e-8,
                                dps: int = DEFAULT_DPS) -> FixtureReport:
    """Evaluate the fixture on computed ``f(m)`` for ``m`` in ``m_range`` (inclusive).

    The residual at each ``m`` is ``|sum c_i f(m+s_i) - rhs| / sum |terms|``.
    Indices where some ``f(m + s_i)`` would need ``m + s_i < 1`` are skipped.
    """
    fixtures = load_fixtures()
    if which not in fixtures:
        raise ValidationError(f"unknown fixture {which!r}; known: {sorted(fixtures)}")
    fx = fixtures[which]
    p = Fraction(p)
    cache: dict[int, object] = {}

    def f(m):
        if m not in cache:
            cache[m] = f_value(fx.down, m, p, dps)
        return cache[m]

    residuals = []
    with mpmath.workdps(dps):
        rhs = fx.rhs_value()
        lo, hi = m_range
        for m in range(lo, hi + 1):
            if m + min(fx.shifts) < 1:
                continue
            cs = fx.coefficient_values(m, p)
            terms = [mpmath.mpf(c.numerator) / c.denominator * f(m + s) for c, s in zip(cs, fx.shifts)]
            res = mpmath.fsum(terms) - rhs
            scale = mpmath.fsum(abs(x) for x in terms) + abs(rhs)
            residuals.append((m, float(abs(res) / scale) if scale else float(abs(res))))
        init_err = []
        for key, expr in fx.initial.items():
            mm = int(key)
            init_err.append((mm, float(abs(f(mm) - _mp_eval(expr)))))
    return FixtureReport(fx.id, p, tuple(m_range), tuple(residuals), tol, tuple(init_err))
