"""Algebraic first-passage PGFs and their algebraic-number moments.

The first-passage PGF ``f(t)`` of any die satisfies ``P(f, t) = 0``.  Moments
come from the expansion of the relevant branch at ``t = 1``: with
``f = f0 + y`` and ``t = 1 + s`` the branch is ``y = s u(s)``, where ``u(0)`` is
a simple root of the lowest-degree form of ``P(f0 + y, 1 + s)``.  That root
generates a number field in which every later coefficient of ``u``, and hence
every moment, is computed exactly by Newton-style iteration.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from ..exact.mpoly import BivarPoly, MPoly
from ..exact.poly import Poly, series_pow
from ..exact.resultant import resultant_eliminate
from ..exact.roots import RootInterval, factor_over_q, real_roots, refine_root
from ..fit import AlgebraicEquation, fit_algebraic
from ..markov import ComputationError, GameStats, InfiniteMomentError, ValidationError, stirling2_row
from .. import numeric
from .die import NEGATIVE, POSITIVE, ZERO, GeneralDie
from .numberfield import NumberField
from .wab import factor_bivariate, wab_series


@dataclass
class AlgebraicPGF:
    """``f(t)**power`` where ``f`` (first passage to capital ``>= 1``) solves ``equation``."""

    die: GeneralDie
    equation: AlgebraicEquation
    power: int = 1
    degree_schedule: tuple = ()
    _cache: list = field(default_factory=list, repr=False, compare=False)

    @property
    def drift_class(self) -> str:
        return self.die.drift_class

    def base_series(self, K: int) -> list[Fraction]:
        if len(self._cache) < K + 1:
            self._cache[:] = wab_series(self.die, K)
        return self._cache[: K + 1]

    def series(self, K: int) -> list[Fraction]:
        base = self.base_series(K)
        return base if self.power == 1 else series_pow(base, self.power, K + 1)

    def check(self, K: int) -> bool:
        """``P(f(t), t) = O(t**(K+1))`` for the cached series."""
        return self.equation.annihilates(self.base_series(K), K + 1)


# ---------------------------------------------------------------------------
# closed-form families
# ---------------------------------------------------------------------------


def _prob(p) -> Fraction:
    p = Fraction(p)
    if not 0 < p < 1:
        raise ValidationError("probability must lie strictly between 0 and 1")
    return p


def catalan_pgf(p, n: int = 1) -> AlgebraicPGF:
    """First passage to ``n`` with steps {+1 w.p. p, -1 w.p. 1-p}: ``f**n`` with
    ``(1-p) t f**2 - f + p t = 0``."""
    return fuss_pgf(1, p, n)


def fuss_pgf(k: int, p, n: int = 1) -> AlgebraicPGF:
    """First passage to ``n`` with steps {+1 w.p. p, -k w.p. 1-p}.

    With ``g`` the (1,-k) Dyck-word factor, ``g - 1 - p**k (1-p) t**(k+1) g**(k+1) = 0``
    and the one-step PGF is ``h = p t g``, i.e. ``(1-p) t h**(k+1) - h + p t = 0``.
    """
    p = _prob(p)
    if k < 1 or n < 1:
        raise ValidationError("need k >= 1 and n >= 1")
    die = GeneralDie(((1, p), (-k, 1 - p)))
    eq = BivarPoly({(k + 1, 1): 1 - p, (1, 0): -1, (0, 1): p})
    return AlgebraicPGF(die, AlgebraicEquation(eq), n)


def fuss_dyck_equation(k: int, p) -> AlgebraicEquation:
    """``g - 1 - p**k (1-p) t**(k+1) g**(k+1) = 0`` for the Dyck-word factor."""
    p = _prob(p)
    return AlgebraicEquation(BivarPoly({(1, 0): 1, (0, 0): -1, (k + 1, k + 1): -(p**k) * (1 - p)}))


def mixed_case_pgf(k: int, p) -> AlgebraicPGF:
    """Steps {-1 w.p. p, +k w.p. 1-p}: ``f = (1-p) t g sum_{i<k} (p t g)**i`` with
    ``g - 1 - p**k (1-p) t**(k+1) g**(k+1) = 0``; ``g`` is eliminated by a resultant."""
    p = _prob(p)
    if k < 1:
        raise ValidationError("need k >= 1")
    die = GeneralDie(((-1, p), (k, 1 - p)))
    names = ("g", "f", "t")
    g, f, t = (MPoly.var(names, v) for v in names)
    A = g - 1 - (t ** (k + 1)) * (g ** (k + 1)) * (p**k * (1 - p))
    inner = MPoly.const(names, 0)
    for i in range(k):
        inner = inner + (t * g * p) ** i
    B = f - t * g * inner * (1 - p)
    R = resultant_eliminate(A, B, "g")
    biv = BivarPoly(R.terms)
    series = wab_series(die, 40)
    for factor in factor_bivariate(biv):
        if not any(factor.substitute_series(series, len(series))):
            return AlgebraicPGF(die, AlgebraicEquation(factor.content_normalized()))
    raise ComputationError("no factor of the eliminant annihilates the series")


# ---------------------------------------------------------------------------
# guess-and-verify for an arbitrary die
# ---------------------------------------------------------------------------


class DegreeBoundsExhausted(ComputationError):
    pass


def pgf_algebraic_equation(die: GeneralDie, max_total_degree: int = 12) -> AlgebraicPGF:
    """Fit ``P(f, t)`` to the exact series with increasing total-degree bound ``S``.

    For each ``S`` the series is computed to ``(S+1)**2 + 8`` terms (fit on two
    thirds, verify on all); the lowest total-degree annihilator is returned.
    """
    die.require_both_directions()
    tried = []
    for S in range(2, max_total_degree + 1):
        L = (S + 1) ** 2 + 8
        series = wab_series(die, L - 1)
        tried.append((S, S))
        eq = fit_algebraic(series, S, S)
        if eq is not None:
            pgf = AlgebraicPGF(die, eq, 1, tuple(tried))
            pgf._cache[:] = series
            return pgf
    raise DegreeBoundsExhausted(
        f"no algebraic equation found: increase bounds (largest attempted deg_f={max_total_degree}, "
        f"deg_t={max_total_degree})")


# ---------------------------------------------------------------------------
# branch expansion at t = 1
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BranchExpansion:
    """``f(1 + s) = f0 + sum_{i>=1} c[i] s**i`` with ``c[i]`` in ``field``."""

    field: NumberField
    f0: Fraction
    coeffs: tuple[Poly, ...]  # c[0] = f0


def _series_mul_nf(F: NumberField, a: list[Poly], b: list[Poly], n: int) -> list[Poly]:
    out = [Poly() for _ in range(n)]
    for i, x in enumerate(a[:n]):
        if x.is_zero():
            continue
        for j, y in enumerate(b[: n - i]):
            if not y.is_zero():
                out[i + j] = out[i + j] + x * y
    return [F.reduce(c) for c in out]


def _choose_root(R: Poly, estimate: float | None) -> tuple[Poly, RootInterval, int]:
    cands = []
    for g, mult in factor_over_q(R):
        if g.degree < 1:
            continue
        for iv in real_roots(g, Fraction(1, 10**20)):
            cands.append((g, iv, mult))
    if not cands:
        raise ComputationError("tangent polynomial has no real roots")
    if len(cands) > 1 and estimate is None:
        raise ComputationError("several candidate branches; a numeric estimate is required")
    if estimate is None:
        return cands[0]
    return min(cands, key=lambda c: abs(float(c[1].mid) - estimate))


def branch_expansion(P: BivarPoly, order: int, f0=Fraction(1), estimate: float | None = None) -> BranchExpansion:
    """Exact Taylor coefficients ``c[0..order]`` of the branch through ``(f0, 1)``.

    ``estimate`` approximates ``c[1] = f'(1)`` and selects among the roots of
    the tangent polynomial.
    """
    f0 = Fraction(f0)
    Q = P.shift("f", f0).shift("t", 1)
    if (0, 0) in Q.terms:
        raise ComputationError(f"P(f0, 1) != 0 for f0 = {f0}")
    m = min(a + b for a, b in Q.terms)
    R = Poly([Q.terms.get((a, m - a), Fraction(0)) for a in range(m + 1)])
    g, iv, mult = _choose_root(R, estimate)
    if mult > 1:
        raise ComputationError("degenerate branch: repeated tangent root")
    F = NumberField(g, iv)
    c1 = F.alpha()
    dR = F.reduce(R.derivative().compose(c1))
    if dR.is_zero():
        raise ComputationError("degenerate branch: tangent root is not simple")
    inv_dR = F.inv(dR)
    # H(u, s) = sum q_ab u**a s**(a+b-m)
    H = [(a, a + b - m, c) for (a, b), c in Q.terms.items()]
    max_a = max(a for a, _, _ in H)
    N = max(order, 1)
    u = [c1] + [Poly() for _ in range(N - 1)]
    for n in range(1, N):
        powers = [[Poly.const(1)] + [Poly()] * n]
        for _ in range(max_a):
            powers.append(_series_mul_nf(F, powers[-1], u[: n + 1], n + 1))
        val = Poly()
        for a, sh, c in H:
            if sh <= n:
                val = val + powers[a][n - sh] * c
        u[n] = F.reduce(-(val * inv_dR))
    coeffs = (Poly.const(f0),) + tuple(u[: order])
    return BranchExpansion(F, f0, coeffs[: order + 1])


def _moments_from_branch(be: BranchExpansion, power: int, order: int) -> list[Poly]:
    """Raw moments ``E[X**j]`` (``j = 0..order``) of ``F = f**power / f(1)**power``."""
    F = be.field
    base = list(be.coeffs) + [Poly()] * (order + 1 - len(be.coeffs))
    acc = [Poly.const(1)] + [Poly()] * order
    for _ in range(power):
        acc = _series_mul_nf(F, acc, base, order + 1)
    norm = Fraction(1) / be.f0**power
    fact = [F.reduce(acc[i] * (factorial(i) * norm)) for i in range(order + 1)]
    out = []
    for j in range(order + 1):
        S = stirling2_row(j)
        out.append(F.reduce(sum((fact[i] * S[i] for i in range(j + 1)), Poly())))
    return out


def _require_drift(pgf: AlgebraicPGF, conditional: bool) -> None:
    dc = pgf.drift_class
    if dc == ZERO:
        raise InfiniteMomentError("infinite moment: zero drift gives an infinite expectation")
    if dc == NEGATIVE and not conditional:
        raise InfiniteMomentError("infinite moment: negative drift; use conditional mode")


def escape_probability(pgf: AlgebraicPGF) -> tuple[Poly, RootInterval]:
    """``f(1)`` as a root of ``P(f, 1) = 0`` (the probability of ever reaching 1)."""
    at1 = pgf.equation.poly.at_t(1)
    est = float(numeric.float_first_passage(pgf.die).sum())
    best = None
    for g, _ in factor_over_q(at1):
        if g.degree < 1:
            continue
        for iv in real_roots(g, Fraction(1, 10**30)):
            d = abs(float(iv.mid) - est)
            if best is None or d < best[0]:
                best = (d, g, iv)
    if best is None:
        raise ComputationError("P(f, 1) has no real root")
    return best[1].primitive(), best[2]


def _base_point(pgf: AlgebraicPGF, conditional: bool) -> Fraction:
    _require_drift(pgf, conditional)
    if pgf.drift_class == POSITIVE:
        return Fraction(1)
    g, iv = escape_probability(pgf)
    if g.degree != 1:
        raise ComputationError("irrational escape probability: use numeric-pgf for conditional moments")
    return -g[0] / g[1]


def _slope_estimate(pgf: AlgebraicPGF) -> float:
    probs = numeric.float_first_passage(pgf.die)
    return float(sum(k * p for k, p in enumerate(probs)))


def exact_moments(pgf: AlgebraicPGF, order: int, conditional: bool = False) -> tuple[NumberField, list[Poly]]:
    """Raw moments ``0..order`` as elements of the branch's number field."""
    f0 = _base_point(pgf, conditional)
    be = branch_expansion(pgf.equation.poly, order, f0, _slope_estimate(pgf))
    return be.field, _moments_from_branch(be, pgf.power, order)


def rational_moments(pgf: AlgebraicPGF, order: int, conditional: bool = False) -> GameStats:
    """Raw and central moments when they are rational (nonsingular branch)."""
    F, mom = exact_moments(pgf, order, conditional)
    if F.degree > 1:
        raise ComputationError("moments are irrational; use moment_min_poly")
    raw = [F.reduce(m)[0] for m in mom]
    return GameStats.from_raw(raw)


def catalan_moments(p, n: int, j: int, conditional: bool = False) -> GameStats:
    """Moments of the first passage to ``n`` for steps {+1 w.p. p, -1}."""
    return rational_moments(catalan_pgf(p, n), j, conditional)


def fuss_moments(k: int, p, n: int, j: int, conditional: bool = False) -> GameStats:
    """Moments of the first passage to ``n`` for steps {+1 w.p. p, -k}."""
    return rational_moments(fuss_pgf(k, p, n), j, conditional)


# ---------------------------------------------------------------------------
# minimal polynomials of moments
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MinPolyResult:
    """``annihilating_poly`` (integer, irreducible) vanishes at the ``order``-th raw moment,
    which lies in ``isolated_root``."""

    order: int
    annihilating_poly: Poly
    isolated_root: RootInterval

    @property
    def value(self) -> float:
        return float(self.isolated_root.mid)

    def int_coeffs(self) -> list[int]:
        return self.annihilating_poly.int_coeffs()

    def refine(self, width) -> "MinPolyResult":
        iv = refine_root(self.annihilating_poly, self.isolated_root, width)
        return MinPolyResult(self.order, self.annihilating_poly, iv)


ROOT_WIDTH = Fraction(1, 10**20)


def moment_min_poly(target, j: int, conditional: bool = False) -> MinPolyResult:
    """Minimal polynomial of ``E[X**j]`` for a die (equation fitted) or an ``AlgebraicPGF``."""
    if j < 1:
        raise ValueError("moment order must be at least 1")
    pgf = target if isinstance(target, AlgebraicPGF) else pgf_algebraic_equation(target)
    F, mom = exact_moments(pgf, j, conditional)
    poly, iv = F.minimal_polynomial(mom[j])
    if iv.width > ROOT_WIDTH:
        iv = refine_root(poly, iv, ROOT_WIDTH)
    return MinPolyResult(j, poly, iv)


def moment_stats(target, order: int, conditional: bool = False) -> list[MinPolyResult]:
    pgf = target if isinstance(target, AlgebraicPGF) else pgf_algebraic_equation(target)
    F, mom = exact_moments(pgf, order, conditional)
    out = []
    for j in range(1, order + 1):
        poly, iv = F.minimal_polynomial(mom[j])
        out.append(MinPolyResult(j, poly, refine_root(poly, iv, ROOT_WIDTH) if iv.width > ROOT_WIDTH else iv))
    return out


def expectation_resultant_poly(P: BivarPoly) -> Poly:
    """Polynomial in ``z`` vanishing at ``f'(1)``, by elimination.

    ``f' = -P_t / P_f`` along the branch, so ``Res_f(P, P_f z + P_t)`` vanishes
    on ``(f'(t), t)``; the lowest-order coefficient in ``t - 1`` of that
    resultant vanishes at ``f'(1)``.
    """
    names = ("f", "z", "t")
    lift = lambda B: MPoly(names, {(i, 0, j): c for (i, j), c in B.terms.items()})
    A = lift(P)
    z = MPoly.var(names, "z")
    Bq = lift(P.diff("f")) * z + lift(P.diff("t"))
    R = resultant_eliminate(A, Bq, "f")
    R = BivarPoly(R.terms, ("z", "t")).shift("t", 1)
    if R.is_zero():
        raise ComputationError("degenerate elimination")
    b = min(e[1] for e in R.terms)
    return Poly([R.terms.get((i, b), Fraction(0)) for i in range(max(e[0] for e in R.terms) + 1)])
