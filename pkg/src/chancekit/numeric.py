"""Exact truncation of first-passage PGFs for arbitrary dice.

``F_0(x) = 1``; each round multiplies by the die polynomial ``h(x)`` and moves
the part with exponent ``>= m`` into the captured series:

    A = F_{i-1} h,   f_i = f_{i-1} + G_m[A](1) t**i,   F_i = A - G_m[A].

Coefficients are kept as integers scaled by ``Q**i`` (``Q`` the common
denominator of the die), so every step is exact and probability conservation
``f_i(1) + F_i(1) = 1`` is checked as an integer identity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

import numpy as np

from .exact.laurent import LaurentPoly, positive_part
from .markov import ComputationError, InfiniteMomentError
from .ruin.die import NEGATIVE, ZERO, GeneralDie

DEFAULT_K_CAP = 10**6


@dataclass(frozen=True)
class TruncatedPGF:
    """First ``K`` coefficients of the first-passage-to-``>= goal`` PGF.

    ``residual_state`` is ``F_K(x)`` (walks still below the goal) and
    ``pruned_mass`` is the probability discarded by the optional pruning mode.
    """

    coeffs: tuple[Fraction, ...]
    goal: int
    residual_state: LaurentPoly
    captured_mass: Fraction
    pruned_mass: Fraction = Fraction(0)
    die: GeneralDie | None = field(default=None, compare=False)

    @property
    def K(self) -> int:
        return len(self.coeffs) - 1

    @property
    def tail(self) -> Fraction:
        """Probability of not having finished within ``K`` rounds."""
        return 1 - self.captured_mass

    def conserved(self) -> bool:
        return self.captured_mass + self.residual_state.at_one() + self.pruned_mass == 1

    def conditional_moment(self, j: int) -> Fraction:
        return conditional_moment(self, j)


def _support_ok(lo: LaurentPoly, i: int, m: int, max_down: int) -> bool:
    if not lo:
        return True
    return lo.min_exponent >= -i * max_down and lo.max_exponent <= m - 1


def _steps(die: GeneralDie, m: int, prune_eps: Fraction | None = None) -> Iterator[tuple[int, int, int, LaurentPoly, int]]:
    """Yield ``(i, Q**i, captured numerator at round i, F_i scaled, pruned numerator)``."""
    if m < 1:
        raise ValueError("goal must be at least 1")
    Q, w = die.scaled()
    h = LaurentPoly({s: c for s, c in w})
    F = LaurentPoly({0: 1})
    scale = 1
    pruned = 0
    max_down = die.max_down
    i = 0
    while True:
        i += 1
        A = F * h
        scale *= Q
        hi, lo = A.split(m)
        got = hi.at_one()
        pruned *= Q
        if prune_eps is not None and lo:
            cut = prune_eps * scale
            keep, drop = {}, 0
            for e, c in lo.terms.items():
                if c < cut:
                    drop += c
                else:
                    keep[e] = c
            lo = LaurentPoly._raw(keep)
            pruned += drop
        if not _support_ok(lo, i, m, max_down):
            raise ComputationError(f"support bound violated at round {i}")
        yield i, scale, got, lo, pruned
        F = lo


def truncated_pgf(die: GeneralDie, m: int, K: int, prune_eps=None) -> TruncatedPGF:
    """Exact first ``K`` coefficients of the PGF of rounds until the capital is ``>= m``."""
    if K < 1:
        raise ValueError("K must be at least 1")
    eps = Fraction(prune_eps) if prune_eps is not None else None
    coeffs = [Fraction(0)]
    for i, scale, got, lo, pruned in _steps(die, m, eps):
        coeffs.append(Fraction(got, scale))
        if i == K:
            break
    return _finish(die, m, coeffs, lo, scale, pruned)


def _finish(die, m, coeffs, lo, scale, pruned) -> TruncatedPGF:
    captured = sum(coeffs, Fraction(0))
    residual = LaurentPoly({e: Fraction(c, scale) for e, c in lo.terms.items()})
    tp = TruncatedPGF(tuple(coeffs), m, residual, captured, Fraction(pruned, scale), die)
    # exact conservation: integer identity at the final scale
    total = sum(int(c * scale) for c in coeffs) + lo.at_one() + pruned
    if total != scale:
        raise ComputationError("probability conservation failed")
    return tp


def truncated_pgf_until(die: GeneralDie, m: int, eps, cap: int = DEFAULT_K_CAP, prune_eps=None) -> TruncatedPGF:
    """Run the truncation until the unfinished mass is ``<= eps``.

    Positive drift guarantees termination; otherwise the hard ``cap`` applies
    and a ``ComputationError`` reports the remaining mass.
    """
    eps = Fraction(eps)
    peps = Fraction(prune_eps) if prune_eps is not None else None
    coeffs = [Fraction(0)]
    for i, scale, got, lo, pruned in _steps(die, m, peps):
        coeffs.append(Fraction(got, scale))
        if Fraction(lo.at_one() + pruned, scale) <= eps:
            return _finish(die, m, coeffs, lo, scale, pruned)
        if i >= cap:
            raise ComputationError(
                f"unfinished mass {float(Fraction(lo.at_one(), scale)):.3g} after {cap} rounds "
                f"(drift is {die.drift_class})")


def choose_K(die: GeneralDie, m: int, eps, cap: int = DEFAULT_K_CAP) -> int:
    """Smallest power of two ``K`` (from 64) whose unfinished mass is ``<= eps``."""
    tp = truncated_pgf_until(die, m, eps, cap)
    K = 64
    while K < tp.K:
        K *= 2
    return K


def conditional_moment(tp: TruncatedPGF, j: int) -> Fraction:
    """``(t d/dt)**j f_K |_{t=1} / f_K(1)``."""
    if tp.captured_mass == 0:
        raise InfiniteMomentError("no probability mass captured; increase K")
    acc = sum((c * k**j for k, c in enumerate(tp.coeffs) if c), Fraction(0))
    return acc / tp.captured_mass


def float_first_passage(die: GeneralDie, m: int = 1, tail: float = 1e-13, cap: int = 200_000) -> np.ndarray:
    """Double-precision first-passage probabilities, for estimates only.

    Used to discriminate between roots of exact annihilating polynomials.
    """
    if die.drift_class in (ZERO, NEGATIVE):
        cap = min(cap, 20_000)
    lo_bound = 0
    state = np.zeros(1)
    state[0] = 1.0
    out = [0.0]
    faces = [(s, float(p)) for s, p in die.faces]
    max_down = die.max_down
    for _ in range(cap):
        new_lo = lo_bound - max_down
        width = (m - 1) - new_lo + 1
        new = np.zeros(width)
        got = 0.0
        for s, p in faces:
            start = lo_bound + s - new_lo
            end = start + len(state)
            # positions >= m are captured
            cut = min(end, width)
            if cut > start:
                new[start:cut] += p * state[: cut - start]
            if end > width:
                got += p * state[max(width - start, 0):].sum()
        out.append(got)
        state, lo_bound = new, new_lo
        # drop negligible far-left mass to keep the array short
        nz = np.nonzero(state > 1e-300)[0]
        if len(nz):
            state = state[nz[0]:]
            lo_bound += int(nz[0])
        if state.sum() < tail:
            break
    return np.array(out)


def float_moment_estimate(die: GeneralDie, j: int = 1, m: int = 1) -> float:
    """Double-precision estimate of ``E[X**j]`` (conditional on finishing)."""
    probs = float_first_passage(die, m)
    k = np.arange(len(probs), dtype=float)
    mass = probs.sum()
    if mass <= 0:
        raise InfiniteMomentError("no mass captured")
    return float((probs * k**j).sum() / mass)


__all__ = [
    "TruncatedPGF",
    "choose_K",
    "conditional_moment",
    "float_first_passage",
    "float_moment_estimate",
    "positive_part",
    "truncated_pgf",
    "truncated_pgf_until",
]
