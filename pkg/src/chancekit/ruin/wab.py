"""The quadratic ``W_{a,b}`` system and first-passage series.

``W_{a,b}`` enumerates walks from height ``-a`` to height ``-b`` that stay
weakly below the axis, weighting each step ``s`` by ``z_s``.  Four schemas
express every ``W_{a,b}`` through others:

    W_{0,0} = 1 + W_{0,0} sum_{d,u} z_{-d} W_{d-1,u-1} z_u
    W_{a,b} = W_{a-1,b-1} + (sum_u W_{a-1,u-1} z_u) W_{0,b}      (a, b > 0)
    W_{a,0} = (sum_u W_{a-1,u-1} z_u) W_{0,0}                     (a > 0)
    W_{0,b} = W_{0,0} (sum_d z_{-d} W_{d-1,b-1})                  (b > 0)

Starting from ``W_{0,0}`` and the ``W_{0,b}`` needed for the first-passage
enumerator ``Z = sum_u (sum_{b<u} W_{0,b}) z_u``, new unknowns are added until
the set is closed.  (The ``W_{0,0}`` equation splits a path at its last
return to the axis: a prefix in ``W_{0,0}`` followed by an excursion.)
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import sympy

from ..exact.mpoly import BivarPoly, MPoly
from ..exact.poly import series_mul
from ..exact.resultant import resultant_eliminate
from ..markov import ComputationError
from .die import GeneralDie

# a monomial is (weight steps, W indices); coefficients are always 1
Monomial = tuple[tuple[int, ...], tuple[tuple[int, int], ...]]


def _schema(ab: tuple[int, int], U, D) -> list[Monomial]:
    a, b = ab
    if a == 0 and b == 0:
        return [((), ())] + [((-d, u), ((0, 0), (d - 1, u - 1))) for d in D for u in U]
    if a > 0 and b > 0:
        return [((), ((a - 1, b - 1),))] + [((u,), ((a - 1, u - 1), (0, b))) for u in U]
    if a > 0:
        return [((u,), ((a - 1, u - 1), (0, 0))) for u in U]
    return [((-d,), ((0, 0), (d - 1, b - 1))) for d in D]


@dataclass(frozen=True)
class WabSystem:
    """Closed set of unknowns with one quadratic equation each, plus the ``Z`` combination."""

    U: tuple[int, ...]
    D: tuple[int, ...]
    unknowns: tuple[tuple[int, int], ...]
    equations: dict
    target: tuple[Monomial, ...]
    closed: bool

    @property
    def size(self) -> int:
        return len(self.unknowns)

    @staticmethod
    def var_name(ab: tuple[int, int]) -> str:
        return f"W{ab[0]}_{ab[1]}"

    def weight_names(self) -> list[str]:
        return [f"z{u}" for u in self.U] + [f"z_{d}" for d in self.D]

    def symbolic(self) -> tuple[list[MPoly], MPoly]:
        """Equations ``W_ab - rhs = 0`` and ``Z``'s expression, over ``W``'s and ``z``'s."""
        names = [self.var_name(ab) for ab in self.unknowns] + self.weight_names()
        return self._as_mpolys(names, lambda s: MPoly.var(names, f"z{s}" if s > 0 else f"z_{-s}"))

    def specialized(self, die: GeneralDie) -> tuple[list[MPoly], MPoly]:
        """Same with ``z_s = p_s t`` (probability specialization)."""
        names = [self.var_name(ab) for ab in self.unknowns] + ["t"]
        t = MPoly.var(names, "t")
        return self._as_mpolys(names, lambda s: t * die.prob(s))

    def _as_mpolys(self, names, weight):
        def mono(m: Monomial) -> MPoly:
            steps, ws = m
            out = MPoly.const(names, 1)
            for s in steps:
                out = out * weight(s)
            for ab in ws:
                out = out * MPoly.var(names, self.var_name(ab))
            return out

        eqs = []
        for ab in self.unknowns:
            rhs = MPoly.const(names, 0)
            for m in self.equations[ab]:
                rhs = rhs + mono(m)
            eqs.append(MPoly.var(names, self.var_name(ab)) - rhs)
        Z = MPoly.const(names, 0)
        for m in self.target:
            Z = Z + mono(m)
        return eqs, Z


class ClosureError(ComputationError):
    pass


def setup_wab_system(die: GeneralDie, bound: int = 10_000) -> WabSystem:
    """Close the schemas starting from ``W_{0,0}`` and the ``W_{0,b}`` used by ``Z``."""
    die.require_both_directions()
    U, D = die.U, die.D
    target = tuple(((u,), ((0, b),)) for u in U for b in range(u))
    todo = [(0, 0)] + [(0, b) for b in range(1, max(U))]
    eqs: dict = {}
    while todo:
        ab = todo.pop()
        if ab in eqs:
            continue
        if len(eqs) >= bound:
            raise ClosureError(f"W-system closure exceeded {bound} unknowns")
        eqs[ab] = _schema(ab, U, D)
        for _, ws in eqs[ab]:
            for w in ws:
                if w not in eqs:
                    todo.append(w)
    unknowns = tuple(sorted(eqs))
    return WabSystem(U, D, unknowns, {k: tuple(eqs[k]) for k in unknowns}, target, True)


def solve_wab_series(system: WabSystem, die: GeneralDie, N: int) -> dict:
    """Power series (``N`` terms) of every unknown and of ``Z`` under ``z_s = p_s t``.

    Plain fixed-point iteration: each pass fixes at least one more order
    except for the ``W_{a-1,b-1}`` shortcut, whose depth is bounded by the
    largest index, so ``N + max(a + b) + 1`` passes suffice.
    """
    zero = [Fraction(0)] * N
    one = [Fraction(1)] + [Fraction(0)] * (N - 1)
    W = {ab: list(zero) for ab in system.unknowns}

    def mono(m: Monomial):
        steps, ws = m
        out = list(one)
        for s in steps:
            p = die.prob(s)
            out = [Fraction(0)] + [c * p for c in out[:-1]]
        for ab in ws:
            out = series_mul(out, W[ab], N)
        return out

    depth = max(a + b for a, b in system.unknowns) + 1
    for _ in range(N + depth):
        new = {}
        for ab in system.unknowns:
            acc = list(zero)
            for m in system.equations[ab]:
                acc = [x + y for x, y in zip(acc, mono(m))]
            new[ab] = acc
        W = new
    Z = list(zero)
    for m in system.target:
        Z = [x + y for x, y in zip(Z, mono(m))]
    out = dict(W)
    out["Z"] = Z
    return out


def wab_series(die: GeneralDie, K: int) -> list[Fraction]:
    """``[Prob(X = k) for k = 0..K]``, ``X`` the first round with a strictly positive capital.

    Dense integer dynamic programming over positions ``<= 0``; positions from
    which the goal is out of reach in the remaining rounds are dropped.
    """
    if K < 1:
        raise ValueError("K must be at least 1")
    Q, w = die.scaled()
    max_up = die.max_up
    if max_up == 0:
        return [Fraction(0)] * (K + 1)
    # state[j] = Q**i * Prob(position = lo + j, not yet positive)
    lo = 0
    state = [1]
    out = [Fraction(0)]
    scale = 1
    for i in range(1, K + 1):
        scale *= Q
        floor = 1 - (K - i) * max_up  # lowest position that can still matter
        new_lo = max(lo - die.max_down, floor) if floor <= 0 else 1
        width = max(1 - new_lo, 0)
        new = [0] * width
        got = 0
        for s, ws in w:
            off = lo + s - new_lo
            for j, c in enumerate(state):
                if not c:
                    continue
                k = j + off
                if k >= width:
                    got += ws * c
                elif k >= 0:
                    new[k] += ws * c
        out.append(Fraction(got, scale))
        state, lo = new, new_lo
    return out


def eliminate_wab_system(system: WabSystem, die: GeneralDie, check_terms: int = 30) -> BivarPoly:
    """Eliminate all ``W``'s by successive resultants; returns the irreducible
    ``P(f, t)`` annihilating ``Z``.  Intended for small systems (cross-check path)."""
    eqs, Zexpr = system.specialized(die)
    names = eqs[0].names
    Znames = ("Z",) + names
    lift = lambda P: MPoly(Znames, {(0,) + e: c for e, c in P.terms.items()})
    polys = [lift(e) for e in eqs] + [MPoly.var(Znames, "Z") - lift(Zexpr)]
    for ab in system.unknowns:
        v = system.var_name(ab)
        having = [P for P in polys if P.degree(v) > 0]
        rest = [P for P in polys if P.degree(v) == 0]
        having.sort(key=lambda P: (P.degree(v), len(P.terms)))
        for P in having[1:]:
            R = resultant_eliminate(having[0], P, v)
            if not R.is_zero():
                rest.append(MPoly(tuple(n for n in having[0].names if n != v), R.terms).rename(
                    tuple(n for n in having[0].names if n != v)))
        polys = [_reinsert(P, v) for P in rest]
    remaining = polys
    series = wab_series(die, check_terms)
    for P in remaining:
        idx = [P.names.index("Z"), P.names.index("t")]
        biv = BivarPoly({(e[idx[0]], e[idx[1]]): c for e, c in P.terms.items()})
        for factor in factor_bivariate(biv):
            if _annihilates(factor, series):
                return factor.content_normalized()
    raise ComputationError("elimination produced no annihilating factor")


def _reinsert(P: MPoly, v: str) -> MPoly:
    """Keep variable lists aligned after an elimination by dropping ``v``."""
    if v not in P.names:
        return P
    k = P.names.index(v)
    return MPoly(P.names[:k] + P.names[k + 1:], {e[:k] + e[k + 1:]: c for e, c in P.terms.items()})


def _annihilates(P: BivarPoly, series) -> bool:
    return not any(P.substitute_series(series, len(series)))


def factor_bivariate(P: BivarPoly) -> list[BivarPoly]:
    """Irreducible factors over Q (without multiplicities)."""
    f, t = sympy.symbols("f t")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * f**i * t**j for (i, j), c in P.terms.items())
    _, factors = sympy.factor_list(expr, f, t)
    out = []
    for g, _ in factors:
        gp = sympy.Poly(g, f, t)
        terms = {m: Fraction(int(c.p), int(c.q)) for m, c in gp.terms()}
        out.append(BivarPoly(terms))
    return out
