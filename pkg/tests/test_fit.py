"""Guessing C-finite and P-recursive recurrences and algebraic equations from data."""

from __future__ import annotations

import random
from fractions import Fraction
from math import comb, factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chancekit.exact import BivarPoly, Poly, RationalFunction, rf_series
from chancekit.fit import (
    CRecurrence,
    InsufficientDataError,
    PRecurrence,
    berlekamp_massey,
    fit_algebraic,
    fit_cfinite,
    fit_precursive,
    verify_recurrence,
)

from conftest import small_rationals

# ---------------------------------------------------------------------------
# generators of structured data
# ---------------------------------------------------------------------------


def random_rational_function(rng: random.Random, max_deg: int = 8) -> RationalFunction:
    dn, dd = rng.randint(0, max_deg), rng.randint(1, max_deg)
    num = Poly([Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(dn + 1)])
    den = Poly([1] + [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(dd)])
    return RationalFunction(num, den)


def random_hypergeometric(rng: random.Random, count: int) -> tuple[list[Fraction], tuple[Poly, Poly]]:
    """``a(n) = r(n) a(n-1)`` with ``r`` a ratio of linear polynomials without positive integer poles."""
    p = Poly([rng.randint(1, 6), rng.randint(1, 4)])
    q = Poly([rng.randint(1, 6), rng.randint(1, 4)])
    a = [Fraction(rng.randint(1, 5))]
    for n in range(1, count):
        a.append(a[-1] * p(n) / q(n))
    return a, (p, q)


def random_algebraic_series(rng: random.Random, count: int) -> tuple[list[Fraction], BivarPoly]:
    """Series solution of ``f = c + t * R(f, t)`` for a random small ``R`` (computed by fixed point)."""
    c = Fraction(rng.randint(1, 3))
    R = {(rng.randint(0, 2), rng.randint(0, 1)): Fraction(rng.randint(1, 4), rng.randint(1, 3)) for _ in range(3)}
    f = [c] + [Fraction(0)] * (count - 1)
    for _ in range(count):
        powers = [[Fraction(1)] + [Fraction(0)] * (count - 1)]
        for _ in range(2):
            prev = powers[-1]
            powers.append([sum(prev[i] * f[k - i] for i in range(k + 1)) for k in range(count)])
        new = [c] + [Fraction(0)] * (count - 1)
        for (i, j), coef in R.items():
            for k in range(count):
                src = k - 1 - j
                if src >= 0:
                    new[k] += coef * powers[i][src]
        f = new
    terms = {(1, 0): Fraction(-1), (0, 0): c}
    for (i, j), coef in R.items():
        terms[(i, j + 1)] = terms.get((i, j + 1), 0) + coef
    return f, BivarPoly(terms)


# ---------------------------------------------------------------------------
# C-finite
# ---------------------------------------------------------------------------


def test_fibonacci():
    data = [0, 1]
    for _ in range(20):
        data.append(data[-1] + data[-2])
    rec = fit_cfinite(data, 5)
    assert rec.order == 2 and rec.coeffs == (1, 1)
    assert rec.terms(30)[29] == 514229
    f = rec.to_rational_function()
    assert f == RationalFunction(Poly([0, 1]), Poly([1, -1, -1]))


def test_berlekamp_massey_minimal_length():
    C, L = berlekamp_massey([1, 2, 4, 8, 16, 32, 64, 128])
    assert L == 1 and C == Poly([1, -2])


def test_insufficient_data():
    with pytest.raises(InsufficientDataError) as e:
        fit_cfinite([1, 2, 3], 4)
    assert e.value.required > 3


def test_cfinite_none_for_non_recurrent_data():
    rng = random.Random(7)
    data = [Fraction(rng.randint(-10**6, 10**6)) for _ in range(30)]
    assert fit_cfinite(data, 5) is None


def test_cfinite_factorials_rejected():
    assert fit_cfinite([factorial(n) for n in range(30)], 10) is None


@settings(max_examples=100)
@given(st.randoms(use_true_random=False))
def test_cfinite_round_trip_random_rational_functions(rng):
    f = random_rational_function(rng)
    L = max(f.num.degree + 1, f.den.degree)
    data = rf_series(f, 2 * L + 25)
    rec = fit_cfinite(data, L)
    assert rec is not None
    assert rec.to_rational_function() == f
    # the characteristic polynomial divides the reversed denominator (here equal after normalization)
    rev = f.den.reverse() if f.den.degree >= 0 else f.den
    assert rec.characteristic_poly().monic().divides(rev.monic() * Poly.monomial(max(0, rec.order - rev.degree)))


@settings(max_examples=50)
@given(st.randoms(use_true_random=False))
def test_cfinite_holdout_discipline(rng):
    """A returned recurrence predicts terms that were never shown to the fitter."""
    f = random_rational_function(rng, 6)
    L = max(f.num.degree + 1, f.den.degree)
    full = rf_series(f, 2 * L + 60)
    shown = full[: 2 * L + 20]
    rec = fit_cfinite(shown, L)
    assert rec is not None
    assert rec.terms(len(full)) == full


def test_crecurrence_validation():
    with pytest.raises(ValueError):
        CRecurrence((Fraction(1), Fraction(0)), (Fraction(1), Fraction(1)), 2)


# ---------------------------------------------------------------------------
# P-recursive
# ---------------------------------------------------------------------------


def test_factorial_recurrence():
    data = [factorial(n) for n in range(25)]
    rec = fit_precursive(data, 2, 2)
    assert rec.order == 1
    assert rec.extend(40)[39] == factorial(39)


def test_central_binomials():
    data = [comb(2 * n, n) for n in range(30)]
    rec = fit_precursive(data, 2, 2)
    assert rec is not None and rec.order == 1
    # n a(n) = (4n - 2) a(n-1)
    assert rec.equivalent(PRecurrence((Poly([0, 1]), Poly([2, -4]))))


def test_precursive_offset():
    data = [Fraction(1, n) for n in range(1, 30)]
    rec = fit_precursive(data, 2, 2, offset=1)
    assert rec.offset == 1
    assert verify_recurrence(rec, data, offset=1).ok


@settings(max_examples=50)
@given(st.randoms(use_true_random=False))
def test_precursive_holdout_discipline(rng):
    full, (p, q) = random_hypergeometric(rng, 60)
    shown = full[:30]
    rec = fit_precursive(shown, 2, 2)
    assert rec is not None
    assert rec.extend(len(full)) == full
    # the relation q(n) a(n) = p(n) a(n-1) is recovered up to a common factor
    if rec.order == 1:
        assert rec.equivalent(PRecurrence((q, -p)))


def test_verify_recurrence_reports_first_failure():
    data = [Fraction(2**n) for n in range(20)]
    rec = fit_cfinite(data, 3)
    bad = list(data)
    bad[13] += 1
    ok, first = verify_recurrence(rec, bad)
    assert not ok and first == 13


def test_verify_recurrence_with_tolerance():
    rec = PRecurrence((Poly([1]), Poly([-Fraction(1, 2)])))
    data = [0.5**n * (1 + 1e-12) for n in range(30)]
    assert verify_recurrence(rec, data, tol=1e-9).ok
    data[10] *= 1.01
    assert not verify_recurrence(rec, data, tol=1e-9).ok


# ---------------------------------------------------------------------------
# algebraic
# ---------------------------------------------------------------------------


def catalan(n: int) -> int:
    return comb(2 * n, n) // (n + 1)


def test_catalan_equation():
    eq = fit_algebraic([catalan(n) for n in range(30)], 2, 2)
    assert eq is not None
    # t f^2 - f + 1 up to scale
    target = BivarPoly.from_triples([(2, 1, 1), (1, 0, -1), (0, 0, 1)])
    assert eq.poly.proportional_to(target)


def test_rational_series_gives_linear_equation():
    eq = fit_algebraic([1] * 30, 2, 2)
    assert eq.poly.deg_f == 1


def test_algebraic_insufficient_data():
    with pytest.raises(InsufficientDataError):
        fit_algebraic([1, 1, 2, 5], 2, 2)


@settings(max_examples=50)
@given(st.randoms(use_true_random=False))
def test_algebraic_random_equations_recovered(rng):
    """The recovered equation annihilates the series to twice the fitting precision."""
    N = 30
    series, planted = random_algebraic_series(rng, 2 * N)
    eq = fit_algebraic(series[:N], planted.deg_f, planted.deg_t)
    assert eq is not None
    assert eq.annihilates(series, 2 * N)
    assert max(i + j for i, j in eq.poly.terms) <= max(i + j for i, j in planted.terms)


@given(st.lists(small_rationals(9), min_size=20, max_size=20))
def test_fits_are_sound_on_arbitrary_data(data):
    """Whatever is returned must reproduce every supplied term."""
    rec = fit_cfinite(data, 4)
    if rec is not None:
        assert rec.terms(len(data)) == data
    eq = fit_algebraic(data, 1, 2)
    if eq is not None:
        assert eq.annihilates(data)
