"""Expected rounds until the capital first reaches at least ``m``."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..markov import InfiniteMomentError
from .. import numeric
from .algebraic import AlgebraicPGF, MinPolyResult, fuss_pgf, moment_min_poly, pgf_algebraic_equation
from .die import POSITIVE, GeneralDie

DEFAULT_TAIL = Fraction(1, 10**12)


@dataclass(frozen=True)
class ReachResult:
    """``value`` is the expectation (exact when ``exact`` is set, otherwise the
    conditional mean of a truncation whose unfinished mass is ``tail``)."""

    goal: int
    value: Fraction
    tail: Fraction
    exact: MinPolyResult | None = None
    rounds: int | None = None

    def __float__(self) -> float:
        return float(self.exact.isolated_root.mid) if self.exact else float(self.value)


def reach_m_expectation(die: GeneralDie, m: int, tail=DEFAULT_TAIL) -> ReachResult:
    """``E[X_m]``.

    With ``U = {1}`` the capital passes through every level, so ``X_m`` is a
    sum of ``m`` independent copies of ``X_1`` and its PGF is ``f**m``: the
    answer is exact.  Otherwise the truncation engine runs until at most
    ``tail`` probability is unfinished.
    """
    if m < 1:
        raise ValueError("goal must be at least 1")
    if die.drift_class != POSITIVE:
        raise InfiniteMomentError(f"infinite moment: drift is {die.drift_class}")
    if die.U == (1,):
        if not die.D:
            return ReachResult(m, Fraction(m), Fraction(0), None, m)
        if len(die.D) == 1:
            k = die.D[0]
            base = fuss_pgf(k, die.prob(1), m)
        else:
            fitted = pgf_algebraic_equation(die)
            base = AlgebraicPGF(die, fitted.equation, m)
        res = moment_min_poly(base, 1)
        value = -res.annihilating_poly[0] / res.annihilating_poly[1] if res.annihilating_poly.degree == 1 \
            else res.isolated_root.mid
        return ReachResult(m, value, Fraction(0), res)
    tp = numeric.truncated_pgf_until(die, m, tail)
    return ReachResult(m, tp.conditional_moment(1), tp.tail, None, tp.K)
