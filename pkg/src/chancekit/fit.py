"""Guess-and-verify fitting of C-finite recurrences, P-recurrences and algebraic equations.

Every fitter works on exact rational data, uses only a prefix of the data to
produce its candidate and re-checks the candidate on the remaining terms
before returning it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exact.linalg import nullspace
from .exact.mpoly import BivarPoly
from .exact.poly import Poly, series_mul
from .exact.ratfunc import RationalFunction


class InsufficientDataError(ValueError):
    """Raised when a fitter is given fewer terms than its bounds require."""

    def __init__(self, required: int, got: int):
        super().__init__(f"need more terms: at least {required} required, got {got}")
        self.required = required
        self.got = got


def _fracs(data: Sequence) -> list[Fraction]:
    return [d if type(d) is Fraction else Fraction(d) for d in data]


# ---------------------------------------------------------------------------
# C-finite recurrences
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CRecurrence:
    """``a(n) = c_1 a(n-1) + ... + c_L a(n-L)`` for every ``n >= start``.

    ``initial`` holds ``a(0) .. a(start-1)``; ``start >= L``.
    """

    coeffs: tuple[Fraction, ...]
    initial: tuple[Fraction, ...]
    start: int

    def __post_init__(self):
        if self.coeffs and not self.coeffs[-1]:
            raise ValueError("last recurrence coefficient must be nonzero")
        if self.start < self.order or len(self.initial) != self.start:
            raise ValueError("initial values must cover a(0)..a(start-1)")

    @property
    def order(self) -> int:
        return len(self.coeffs)

    def terms(self, count: int) -> list[Fraction]:
        out = list(self.initial[:count])
        c = self.coeffs
        for n in range(len(out), count):
            out.append(sum((c[i] * out[n - 1 - i] for i in range(len(c))), Fraction(0)))
        return out

    def denominator(self) -> Poly:
        """``1 - c_1 t - ... - c_L t**L``."""
        return Poly([Fraction(1)] + [-c for c in self.coeffs])

    def characteristic_poly(self) -> Poly:
        """``x**L - c_1 x**(L-1) - ... - c_L``."""
        return self.denominator().reverse(self.order)

    def to_rational_function(self) -> RationalFunction:
        den = self.denominator()
        n = max(self.start, 1)
        num = series_mul(self.terms(n), list(den.coeffs), n)
        return RationalFunction(Poly(num), den)

    def to_str(self) -> str:
        rhs = " + ".join(f"({c})*a(n-{i + 1})" for i, c in enumerate(self.coeffs)) or "0"
        return f"a(n) = {rhs} for n >= {self.start}"


def berlekamp_massey(data: Sequence) -> tuple[Poly, int]:
    """Shortest linear recurrence generating ``data`` over Q.

    Returns ``(C, L)`` with ``C(0) = 1`` such that
    ``sum_i C_i a(n-i) = 0`` for all ``L <= n < len(data)``.
    """
    s = _fracs(data)
    C = [Fraction(1)]
    B = [Fraction(1)]
    L, m, b = 0, 1, Fraction(1)
    for n in range(len(s)):
        d = s[n]
        for i in range(1, L + 1):
            if i < len(C) and C[i]:
                d += C[i] * s[n - i]
        if not d:
            m += 1
            continue
        coef = d / b
        T = list(C)
        need = len(B) + m
        if len(C) < need:
            C = C + [Fraction(0)] * (need - len(C))
        for i, bi in enumerate(B):
            if bi:
                C[i + m] -= coef * bi
        if 2 * L <= n:
            L, B, b, m = n + 1 - L, T, d, 1
        else:
            m += 1
    return Poly(C), L


def _cfinite_from_bm(C: Poly, L: int, data: list[Fraction]) -> CRecurrence:
    order = max(C.degree, 0)
    coeffs = tuple(-C[i] for i in range(1, order + 1))
    start = max(L, order)
    return CRecurrence(coeffs, tuple(data[:start]), start)


def fit_cfinite(data: Sequence, max_order: int, holdout: int | None = None) -> CRecurrence | None:
    """Minimal-order constant-coefficient recurrence satisfied by all of ``data``.

    The candidate comes from Berlekamp-Massey on a prefix; the remaining
    ``holdout`` terms must be reproduced exactly.  Returns ``None`` when no
    recurrence of order ``<= max_order`` fits.
    """
    data = _fracs(data)
    need = 2 * max_order + 4
    if len(data) < need:
        raise InsufficientDataError(need, len(data))
    if holdout is None:
        holdout = max(2, len(data) // 5)
    fit_part = data[: len(data) - holdout]
    C, L = berlekamp_massey(fit_part)
    if 2 * L > len(fit_part) or C.degree > max_order:
        return None
    rec = _cfinite_from_bm(C, L, data)
    ok, _ = verify_recurrence(rec, data)
    return rec if ok else None


# ---------------------------------------------------------------------------
# P-recursive sequences
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PRecurrence:
    """``sum_{i=0..L} p_i(n) a(n-i) = 0``; data index 0 is ``a(offset)``."""

    polys: tuple[Poly, ...]
    offset: int = 0
    initial: tuple[Fraction, ...] = field(default=())

    def __post_init__(self):
        if len(self.polys) < 2 or self.polys[0].is_zero() or self.polys[-1].is_zero():
            raise ValueError("p_0 and p_L must be nonzero and L >= 1")

    @property
    def order(self) -> int:
        return len(self.polys) - 1

    @property
    def degree(self) -> int:
        return max(p.degree for p in self.polys)

    def normalized(self) -> "PRecurrence":
        """Integer coefficients with gcd 1 and positive leading coefficient of ``p_0``."""
        from math import gcd, lcm

        den = 1
        for p in self.polys:
            for c in p.coeffs:
                den = lcm(den, c.denominator)
        g = 0
        for p in self.polys:
            for c in p.coeffs:
                g = gcd(g, c.numerator * (den // c.denominator))
        scale = Fraction(den, g)
        if self.polys[0].lc() < 0:
            scale = -scale
        return PRecurrence(tuple(p * scale for p in self.polys), self.offset, self.initial)

    def equivalent(self, other: "PRecurrence") -> bool:
        """Same relation up to a common rational-function factor: ``p_i q_0 = q_i p_0`` for all i."""
        if self.order != other.order:
            return False
        p0, q0 = self.polys[0], other.polys[0]
        return all(p * q0 == q * p0 for p, q in zip(self.polys, other.polys))

    def extend(self, count: int) -> list[Fraction]:
        """``a(offset) .. a(offset+count-1)`` from the initial values; exact."""
        out = list(self.initial[:count])
        L = self.order
        if len(out) < min(count, L):
            raise ValueError("not enough initial values")
        for k in range(len(out), count):
            n = self.offset + k
            lead = self.polys[0](n)
            if not lead:
                raise ZeroDivisionError(f"leading coefficient vanishes at n={n}")
            acc = Fraction(0)
            for i in range(1, L + 1):
                acc += self.polys[i](n) * out[k - i]
            out.append(-acc / lead)
        return out

    def to_str(self, var: str = "n") -> str:
        parts = []
        for i, p in enumerate(self.polys):
            arg = var if i == 0 else f"{var}-{i}"
            parts.append(f"({p.to_str(var)})*a({arg})")
        return " + ".join(parts) + " = 0"


def fit_precursive(
    data: Sequence,
    max_order: int,
    max_degree: int,
    offset: int = 0,
    holdout: int = 5,
) -> PRecurrence | None:
    """Minimal (order, then degree) polynomial-coefficient recurrence for ``data``."""
    data = _fracs(data)
    need = (max_order + 1) * (max_degree + 1) + max_order + 6
    if len(data) < need:
        raise InsufficientDataError(need, len(data))
    fit_len = len(data) - holdout
    for L in range(1, max_order + 1):
        for d in range(max_degree + 1):
            nunk = (L + 1) * (d + 1)
            rows = []
            for k in range(L, fit_len):
                n = offset + k
                row = []
                for i in range(L + 1):
                    a = data[k - i]
                    pw = Fraction(1)
                    for _ in range(d + 1):
                        row.append(pw * a)
                        pw *= n
                rows.append(row)
            if len(rows) < nunk + 2:
                continue
            for vec in sorted(nullspace(rows), key=lambda v: sum(1 for c in v if c)):
                polys = tuple(Poly(vec[i * (d + 1):(i + 1) * (d + 1)]) for i in range(L + 1))
                if polys[0].is_zero() or polys[-1].is_zero():
                    continue
                rec = PRecurrence(polys, offset, tuple(data[:L]))
                ok, _ = verify_recurrence(rec, data, offset=offset)
                if ok:
                    return rec.normalized()
    return None


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VerifyReport:
    ok: bool
    first_failure: int | None
    max_residual: float = 0.0

    def __iter__(self):
        return iter((self.ok, self.first_failure))


def verify_recurrence(
    rec: CRecurrence | PRecurrence,
    data: Sequence,
    offset: int = 0,
    rhs: Sequence | None = None,
    tol: float | None = None,
) -> VerifyReport:
    """Check that ``rec`` annihilates ``data`` (or maps it to ``rhs``).

    With ``tol=None`` the check is exact.  With a tolerance, data may be
    floating point (e.g. mpmath numbers); the residual at each index is divided
    by ``max(1, sum |term|)`` before comparison, so large polynomial
    coefficients do not distort the test.
    """
    exact = tol is None
    if exact:
        data = _fracs(data)
    if isinstance(rec, CRecurrence):
        polys = [Poly.const(1)] + [Poly.const(-c) for c in rec.coeffs]
        first = rec.start
    else:
        polys = list(rec.polys)
        first = rec.order
    L = len(polys) - 1
    worst = 0.0
    for k in range(first, len(data)):
        n = offset + k
        vals = [p(n) for p in polys]
        if isinstance(rec, PRecurrence) and not vals[0]:
            continue
        terms = [vals[i] * data[k - i] for i in range(L + 1)]
        res = sum(terms[1:], terms[0])
        if rhs is not None:
            res -= rhs[k]
        if exact:
            if res:
                return VerifyReport(False, k, float("inf"))
        else:
            scale = max(1.0, float(sum(abs(x) for x in terms)))
            r = abs(float(res)) / scale
            worst = max(worst, r)
            if r > tol:
                return VerifyReport(False, k, r)
    return VerifyReport(True, None, worst)


# ---------------------------------------------------------------------------
# algebraic equations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AlgebraicEquation:
    """``P(f, t) = 0`` for a power series ``f(t)``."""

    poly: BivarPoly

    def residual_order(self, series: Sequence, n: int) -> int | None:
        """Index of the first nonzero coefficient of ``P(f(t), t)`` below ``n`` (None if all vanish)."""
        out = self.poly.substitute_series(series, n)
        return next((k for k, c in enumerate(out) if c), None)

    def annihilates(self, series: Sequence, n: int | None = None) -> bool:
        n = len(series) if n is None else n
        return self.residual_order(series, n) is None

    def to_str(self) -> str:
        return self.poly.to_str()


def _series_powers(s: list[Fraction], dmax: int, n: int) -> list[list[Fraction]]:
    pw = [[Fraction(1)] + [Fraction(0)] * (n - 1)]
    for _ in range(dmax):
        pw.append(series_mul(pw[-1], s, n))
    return pw


def fit_algebraic(series: Sequence, max_deg_f: int, max_deg_t: int) -> AlgebraicEquation | None:
    """Lowest-total-degree ``P(f, t)`` with ``P(f(t), t) = O(t**N)``.

    The fit uses the first two thirds of the series; the full series (1.5x the
    fitting precision) must also be annihilated.
    """
    s = _fracs(series)
    need = (max_deg_f + 1) * (max_deg_t + 1) + 8
    if len(s) < need:
        raise InsufficientDataError(need, len(s))
    total = len(s)
    nfit = (2 * total) // 3
    powers = _series_powers(s, max_deg_f, nfit)
    for D in range(1, max_deg_f + max_deg_t + 1):
        mons = [(i, j) for i in range(max_deg_f + 1) for j in range(max_deg_t + 1) if i + j <= D]
        if len(mons) + 2 > nfit:
            break
        rows = []
        for k in range(nfit):
            rows.append([powers[i][k - j] if k >= j else Fraction(0) for i, j in mons])
        basis = nullspace(rows)
        if not basis:
            continue
        for vec in sorted(basis, key=lambda v: sum(1 for c in v if c)):
            terms = {m: c for m, c in zip(mons, vec) if c}
            if not any(i >= 1 for i, _ in terms):
                continue
            eq = AlgebraicEquation(BivarPoly(terms).content_normalized())
            if eq.annihilates(s, total):
                return eq
    return None
