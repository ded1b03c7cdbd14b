"""Positive-step pile games: finite PGFs, asymptotic moment polynomials, two-player races."""

from __future__ import annotations

from fractions import Fraction
from math import ceil

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chancekit.exact import Poly
from chancekit.markov import ValidationError
from chancekit.piles import (
    ClosedFormDomainError,
    PositiveDie,
    RecurrenceNotFound,
    asymptotic_moment,
    asymptotic_moments,
    b_closed_form,
    duration_pgf_exact,
    exact_moment,
    exact_win_prob_sequence,
    extend_sequence,
    fair_coin_pile_recurrence,
    win_prob_recurrence,
    win_probability,
)

from conftest import probability_vectors

FAIR12 = PositiveDie.fair(2)


@st.composite
def positive_dice(draw, max_faces: int = 3, max_step: int = 4):
    k = draw(st.integers(1, max_faces))
    steps = draw(st.lists(st.integers(1, max_step), min_size=k, max_size=k, unique=True))
    probs = draw(probability_vectors(k, 6))
    return PositiveDie(tuple(zip(steps, probs)))


def brute_force_pgf(die: PositiveDie, n: int) -> Poly:
    """Enumerate every roll sequence until the running total reaches ``n``."""
    out: dict[int, Fraction] = {}

    def go(total, rounds, prob):
        if total >= n:
            out[rounds] = out.get(rounds, 0) + prob
            return
        for s, p in die.faces:
            go(total + s, rounds + 1, prob * p)

    go(0, 0, Fraction(1))
    deg = max(out)
    return Poly([out.get(k, Fraction(0)) for k in range(deg + 1)])


# ---------------------------------------------------------------------------
# finite PGFs
# ---------------------------------------------------------------------------


def test_small_examples():
    t = Poly.x()
    assert duration_pgf_exact(FAIR12, 1) == t
    assert duration_pgf_exact(FAIR12, 2) == (t + t * t) * Fraction(1, 2)


@pytest.mark.parametrize("die", [FAIR12, PositiveDie.fair(3), PositiveDie(((1, Fraction(1, 3)), (3, Fraction(2, 3))))])
def test_pgf_invariants_up_to_60(die):
    for n in range(1, 61):
        F = duration_pgf_exact(die, n)
        assert F(1) == 1
        assert F.degree <= n
        assert F.degree >= ceil(n / die.max_step)
        assert all(c >= 0 for c in F.coeffs)


@settings(max_examples=30)
@given(positive_dice(), st.integers(1, 8))
def test_pgf_matches_enumeration(die, n):
    assert duration_pgf_exact(die, n) == brute_force_pgf(die, n)


def test_b_closed_form_examples():
    assert b_closed_form(1, 1) == 1
    assert b_closed_form(2, 3) == Fraction(3, 4)
    assert b_closed_form(3, 3) == Fraction(1, 4)
    with pytest.raises(ClosedFormDomainError):
        b_closed_form(2, 4)


def test_b_closed_form_agrees_with_pgf_in_domain():
    for n in range(1, 31):
        F = duration_pgf_exact(FAIR12, n)
        for k in range(n // 2 + 1, n + 2):
            assert b_closed_form(k, n) == F[k], (k, n)


@pytest.mark.parametrize("faces,msg", [
    (((0, Fraction(1)),), "positive"),
    (((1, Fraction(1, 2)), (1, Fraction(1, 2))), "repeated"),
    (((1, Fraction(1, 3)),), "sum to 1"),
    ((), "no faces"),
])
def test_die_validation(faces, msg):
    with pytest.raises(ValidationError, match=msg):
        PositiveDie(faces)


# ---------------------------------------------------------------------------
# asymptotic moments
# ---------------------------------------------------------------------------


def test_fair12_moment_polynomials():
    n = Poly.x()
    assert asymptotic_moment(FAIR12, 1).poly_part == n * Fraction(2, 3) + Fraction(2, 9)
    assert asymptotic_moment(FAIR12, 2, central=True).poly_part == n * Fraction(2, 27) + Fraction(2, 81)
    assert asymptotic_moment(FAIR12, 3, central=True).poly_part == n * Fraction(2, 81) - Fraction(26, 729)
    assert asymptotic_moment(FAIR12, 4, central=True).poly_part == (
        n * n * Fraction(4, 243) + n * Fraction(2, 243) - Fraction(62, 2187))
    assert asymptotic_moment(FAIR12, 1).to_str() == "(2/3)*n + 2/9"


@settings(max_examples=20)
@given(positive_dice())
def test_leading_coefficient_is_reciprocal_mean(die):
    m1 = asymptotic_moment(die, 1).poly_part
    assert m1.degree == 1 and m1[1] == 1 / die.mean


@settings(max_examples=15)
@given(positive_dice(max_faces=3, max_step=3), st.integers(1, 4))
def test_degree_bound_and_exponential_convergence(die, k):
    """deg <= k, and (for aperiodic dice) the finite-n moment approaches the polynomial part geometrically."""
    A = asymptotic_moment(die, k)
    assert A.poly_part.degree <= k
    if 1 not in dict(die.faces):
        return

    def window_error(N):
        return max(abs(exact_moment(die, n, k) - A(n)) for n in range(N, N + 6))

    e40, e120 = window_error(40), window_error(120)
    assert e120 <= e40 / 10 or e40 < Fraction(1, 10**40)


def test_central_moments_consistent_with_raw():
    raw, central = asymptotic_moments(PositiveDie.fair(3), 3)
    mu = raw[1].poly_part
    assert central[2].poly_part == raw[2].poly_part - mu * mu
    assert central[0].poly_part == Poly([1]) and central[1].poly_part.is_zero()


# ---------------------------------------------------------------------------
# two-player races
# ---------------------------------------------------------------------------


def test_fair12_initial_win_sequence():
    assert exact_win_prob_sequence(FAIR12, 4) == [1, Fraction(1, 2), Fraction(5, 8), Fraction(15, 32)]
    assert win_probability(FAIR12, 4) == Fraction(47, 64)


@settings(max_examples=15)
@given(positive_dice(), st.integers(1, 25))
def test_win_sequence_is_sum_of_squares(die, n):
    a = exact_win_prob_sequence(die, n)
    F = duration_pgf_exact(die, n)
    assert a[-1] == sum(c * c for c in F.coeffs)
    assert all(0 < x <= 1 for x in a)


def test_fitted_recurrence_equivalent_to_known():
    rec = win_prob_recurrence(FAIR12, 40)
    known = fair_coin_pile_recurrence()
    assert rec.order == 4
    assert rec.equivalent(known)
    assert list(rec.initial) == [1, Fraction(1, 2), Fraction(5, 8), Fraction(15, 32)]


def test_known_recurrence_extends_exactly():
    seq = extend_sequence(fair_coin_pile_recurrence(), 80)
    assert seq == exact_win_prob_sequence(FAIR12, 80)


def test_win_probability_at_one_thousand():
    """(1 + a(1000)) / 2 via exact recurrence extension."""
    seq = extend_sequence(fair_coin_pile_recurrence(), 1000)
    w = (1 + seq[-1]) / 2
    assert f"{float(w):.9g}" == "0.516384982"


def test_trend_toward_one_half():
    a = exact_win_prob_sequence(FAIR12, 200)
    # not asserted monotone; the tail averages shrink
    assert sum(a[150:]) / 50 < sum(a[50:100]) / 50 < sum(a[5:50]) / 45


@pytest.mark.parametrize("die", [PositiveDie(((1, Fraction(1, 3)), (2, Fraction(2, 3)))),
                                 PositiveDie(((1, Fraction(3, 4)), (2, Fraction(1, 4))))])
def test_recurrences_for_other_dice_predict_unseen_terms(die):
    rec = win_prob_recurrence(die, 60)
    full = exact_win_prob_sequence(die, 90)
    assert extend_sequence(rec, 90) == full


def test_recurrence_search_reports_failure_cleanly():
    with pytest.raises(RecurrenceNotFound, match="increase n_terms"):
        win_prob_recurrence(PositiveDie.fair(3), 40, max_order=2, max_degree=2)


def test_exhaustive_two_step_dice_small():
    # every die on {1,2} with weights in sixths: F_n(1) = 1 and a(n) in (0, 1]
    for w in range(1, 6):
        die = PositiveDie(((1, Fraction(w, 6)), (2, Fraction(6 - w, 6))))
        for n, x in enumerate(exact_win_prob_sequence(die, 20), start=1):
            assert duration_pgf_exact(die, n)(1) == 1 and 0 < x <= 1
