"""Races to a goal ``n`` with a die whose faces are all positive.

The duration ``X_n`` (rounds until the accumulated capital is ``>= n``) has
PGF ``F_n(t)`` with ``F_n = t * sum_r p_r F_{n - i_r}`` and ``F_m = 1`` for
``m <= 0``.  Summing over ``n`` gives the grand generating function
``G(x, t) = (1 + t S(x)) / (1 - t P(x))`` where ``P(x) = sum_r p_r x**i_r``
and ``S(x) = sum_r p_r (x + ... + x**(i_r - 1))``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, lcm

from .exact.poly import Poly, series_div
from .fit import PRecurrence, fit_precursive
from .markov import ValidationError


@dataclass(frozen=True)
class PositiveDie:
    faces: tuple[tuple[int, Fraction], ...]

    def __post_init__(self):
        faces = tuple(sorted((int(s), Fraction(p)) for s, p in self.faces))
        object.__setattr__(self, "faces", faces)
        if not faces:
            raise ValidationError("die has no faces")
        steps = [s for s, _ in faces]
        if len(set(steps)) != len(steps):
            raise ValidationError("repeated die step")
        if any(s < 1 for s in steps):
            raise ValidationError("pile-game die steps must be positive")
        if any(p <= 0 for _, p in faces):
            raise ValidationError("die probabilities must be positive")
        if sum(p for _, p in faces) != 1:
            raise ValidationError("die probabilities do not sum to 1")

    @classmethod
    def fair(cls, k: int) -> "PositiveDie":
        return cls(tuple((i, Fraction(1, k)) for i in range(1, k + 1)))

    @property
    def mean(self) -> Fraction:
        return sum((s * p for s, p in self.faces), Fraction(0))

    @property
    def max_step(self) -> int:
        return self.faces[-1][0]

    def step_poly(self) -> Poly:
        """``P(x) = sum_r p_r x**i_r``."""
        cs = [Fraction(0)] * (self.max_step + 1)
        for s, p in self.faces:
            cs[s] += p
        return Poly(cs)

    def short_poly(self) -> Poly:
        """``S(x) = sum_r p_r (x + ... + x**(i_r - 1))``."""
        cs = [Fraction(0)] * (self.max_step + 1)
        for s, p in self.faces:
            for e in range(1, s):
                cs[e] += p
        return Poly(cs)


def _scaled_pgfs(die: PositiveDie, n_max: int) -> tuple[int, list[list[int]]]:
    """``(Q, G)`` with ``G[n][k] = Q**k * Prob(X_n = k)`` for ``0 <= n <= n_max``."""
    Q = 1
    for _, p in die.faces:
        Q = lcm(Q, p.denominator)
    w = [(s, int(p * Q)) for s, p in die.faces]
    G: list[list[int]] = [[1]]
    for n in range(1, n_max + 1):
        out = [0] * (n + 1)
        for s, ws in w:
            prev = G[n - s] if n - s >= 0 else [1]
            for k, c in enumerate(prev):
                if c:
                    out[k + 1] += ws * c
        while out and not out[-1]:
            out.pop()
        G.append(out)
    return Q, G


def duration_pgf_exact(die: PositiveDie, n: int) -> Poly:
    """``F_n(t)`` as an exact polynomial of degree ``<= n``."""
    if n < 1:
        raise ValueError("goal must be at least 1")
    Q, G = _scaled_pgfs(die, n)
    return Poly([Fraction(c, Q**k) for k, c in enumerate(G[n])])


class ClosedFormDomainError(ValueError):
    pass


def b_closed_form(k: int, n: int) -> Fraction:
    """``Prob(X_n = k)`` for the fair {1,2} die, valid when ``2k > n``."""
    if 2 * k <= n:
        raise ClosedFormDomainError(f"outside closed-form domain: need 2k > n (k={k}, n={n})")
    if n - k < 0:
        return Fraction(0)
    return Fraction(comb(k - 1, n - k) * (3 * k - n), (2 * k - n) * 2**k)


# ---------------------------------------------------------------------------
# asymptotic moments
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AsymptoticMoment:
    """Polynomial part in ``n`` of a moment of ``X_n``; the rest decays exponentially."""

    poly_part: Poly
    order: int
    central: bool = False

    def __call__(self, n) -> Fraction:
        return self.poly_part(n)

    def to_str(self) -> str:
        return self.poly_part.to_str("n")


def _eulerian(k: int) -> Poly:
    """``E_k(y)`` with ``(y d/dy)**k 1/(1-y) = E_k(y) / (1-y)**(k+1)``."""
    y = Poly.x()
    E = Poly.const(1)
    for j in range(k):
        E = y * (E.derivative() * (1 - y) + E * (j + 1))
    return E


def _binom_poly(s: int) -> Poly:
    """``C(n + s - 1, s - 1)`` as a polynomial in ``n`` (``s >= 1``)."""
    out = Poly.const(1)
    for i in range(1, s):
        out = out * Poly((Fraction(i), Fraction(1))) * Fraction(1, i)
    return out


def asymptotic_raw_moment(die: PositiveDie, k: int) -> AsymptoticMoment:
    """Polynomial part of ``E[X_n**k]``.

    ``(t d/dt)**k G`` at ``t = 1`` equals ``E_k(P) (P + S) / (P (1-P)**(k+1))``.
    Writing ``1 - P = (1 - x) Q(x)``, the principal part at ``x = 1`` of
    ``N_k / Q**(k+1) * (1-x)**-(k+1)`` yields the polynomial part, since the
    remaining singularities lie outside the unit disk.
    """
    if k < 0:
        raise ValueError("moment order must be nonnegative")
    if k == 0:
        return AsymptoticMoment(Poly.const(1), 0)
    P, S = die.step_poly(), die.short_poly()
    Ek = _eulerian(k).compose(P)
    Nk = (Ek * (P + S)).exact_div(P)
    one_minus_P = Poly.const(1) - P
    Qx = one_minus_P.exact_div(Poly((1, -1)))
    num = Nk.taylor_at(1, k)
    den = (Qx ** (k + 1)).taylor_at(1, k)
    r = series_div(num, den, k + 1)
    out = Poly()
    for j in range(k + 1):
        if r[j]:
            out = out + _binom_poly(k + 1 - j) * (r[j] * (-1) ** j)
    return AsymptoticMoment(out, k)


def asymptotic_moments(die: PositiveDie, k: int) -> tuple[list[AsymptoticMoment], list[AsymptoticMoment]]:
    """Raw and central asymptotic moments of orders ``0..k``."""
    raw = [asymptotic_raw_moment(die, j) for j in range(k + 1)]
    mu = raw[1].poly_part if k >= 1 else Poly()
    central = []
    for j in range(k + 1):
        acc = Poly()
        for i in range(j + 1):
            acc = acc + raw[i].poly_part * (Poly() - mu) ** (j - i) * comb(j, i)
        central.append(AsymptoticMoment(acc, j, central=True))
    return raw, central


def asymptotic_moment(die: PositiveDie, k: int, central: bool = False) -> AsymptoticMoment:
    """k-th raw (default) or central asymptotic moment as a polynomial in ``n``."""
    if not central:
        return asymptotic_raw_moment(die, k)
    return asymptotic_moments(die, k)[1][k]


def exact_moment(die: PositiveDie, n: int, k: int) -> Fraction:
    """Exact ``E[X_n**k]`` from the finite PGF (used to check the asymptotics)."""
    F = duration_pgf_exact(die, n)
    return sum((c * j**k for j, c in enumerate(F.coeffs)), Fraction(0))


# ---------------------------------------------------------------------------
# two-player races
# ---------------------------------------------------------------------------


def exact_win_prob_sequence(die: PositiveDie, n_max: int) -> list[Fraction]:
    """``[a(1), ..., a(n_max)]`` with ``a(n) = sum_k Prob(X_n = k)**2``.

    The first mover wins the race to ``n`` with probability ``(1 + a(n)) / 2``.
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    Q, G = _scaled_pgfs(die, n_max)
    out = []
    for n in range(1, n_max + 1):
        out.append(sum((Fraction(c * c, Q ** (2 * k)) for k, c in enumerate(G[n]) if c), Fraction(0)))
    return out


def win_probability(die: PositiveDie, n: int) -> Fraction:
    return (1 + exact_win_prob_sequence(die, n)[-1]) / 2


class RecurrenceNotFound(RuntimeError):
    pass


def _bounds_for(n_terms: int, max_degree: int = 4, cap: int = 10) -> tuple[int, int]:
    best = None
    for L in range(1, cap + 1):
        if (L + 1) * (max_degree + 1) + L + 6 <= n_terms:
            best = L
    if best is None:
        raise RecurrenceNotFound("increase n_terms")
    return best, max_degree


def win_prob_recurrence(die: PositiveDie, n_terms: int, max_order: int | None = None,
                        max_degree: int = 4) -> PRecurrence:
    """Fit and holdout-verify a P-recurrence for ``a(n)``, indexed from ``n = 1``."""
    data = exact_win_prob_sequence(die, n_terms)
    if max_order is None:
        max_order, max_degree = _bounds_for(n_terms, max_degree)
    rec = fit_precursive(data, max_order, max_degree, offset=1)
    if rec is None:
        raise RecurrenceNotFound(f"no recurrence of order <= {max_order}, degree <= {max_degree}: increase n_terms")
    return rec


def fair_coin_pile_recurrence() -> PRecurrence:
    """The known order-4 recurrence for the fair {1,2} die, ``a(1..4) = 1, 1/2, 5/8, 15/32``."""
    n = Poly.x()
    p0 = n * (3 * n - 7)
    p1 = (3 * n - 1) * (n - 3) * Fraction(-1, 2)
    p2 = Poly([62, -67, 21]) * Fraction(-1, 16)
    p3 = Poly([2, -17, 6]) * Fraction(-1, 16)
    p4 = (n - 4) * (3 * n - 4) * Fraction(1, 16)
    return PRecurrence((p0, p1, p2, p3, p4), offset=1,
                       initial=(Fraction(1), Fraction(1, 2), Fraction(5, 8), Fraction(15, 32)))


def extend_sequence(rec: PRecurrence, count: int) -> list[Fraction]:
    """Exact continuation of ``rec`` to ``count`` terms (e.g. ``a(1000)``)."""
    return rec.extend(count)
