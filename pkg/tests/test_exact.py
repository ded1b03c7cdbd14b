"""Exact carriers: rationals, polynomials, rational functions, Laurent/bivariate polynomials,
resultants, real roots and linear algebra."""

from __future__ import annotations

from fractions import Fraction
from math import gcd

import pytest
import sympy
from sympy.polys.subresultants_qq_zz import sylvester
from hypothesis import assume, given
from hypothesis import strategies as st

from chancekit.exact import (
    BivarPoly,
    LaurentPoly,
    Poly,
    RationalFunction,
    RationalParseError,
    format_decimal,
    format_rational,
    parse_rational,
    poly_taylor_at,
    positive_part,
    resultant_eliminate,
    rf_eval,
    rf_series,
    series_div,
    series_mul,
    series_pow,
)
from chancekit.exact.linalg import SingularSystemError, charpoly, nullspace, rref, solve
from chancekit.exact.ratfunc import PoleError
from chancekit.exact.resultant import det_fraction, resultant_poly_coeffs
from chancekit.exact.roots import factor_over_q, isolate_real_roots, real_roots, refine_root, squarefree
from chancekit.fit import fit_cfinite

from conftest import BIG, rationals, small_rationals

# ---------------------------------------------------------------------------
# strategies
# ---------------------------------------------------------------------------


def polys(max_deg: int = 6, coeff=None, nonzero: bool = False):
    coeff = coeff or small_rationals(30)
    s = st.lists(coeff, min_size=0, max_size=max_deg + 1).map(Poly)
    return s.filter(lambda p: not p.is_zero()) if nonzero else s


def int_polys(max_deg: int = 5, bound: int = 9, min_deg: int = 0):
    return st.lists(st.integers(-bound, bound), min_size=min_deg + 1, max_size=max_deg + 1).map(Poly).filter(
        lambda p: p.degree >= min_deg)


@st.composite
def rational_functions(draw, max_deg: int = 8):
    num = draw(polys(max_deg))
    den = draw(polys(max_deg, nonzero=True).filter(lambda d: d[0] != 0))
    return RationalFunction(num, den)


def sym(p: Poly, x):
    return sum(sympy.Rational(c.numerator, c.denominator) * x**i for i, c in enumerate(p.coeffs))


# ---------------------------------------------------------------------------
# Rational parsing and rendering
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("text,value", [
    ("3/6", Fraction(1, 2)),
    (" -2 ", Fraction(-2)),
    ("0", Fraction(0)),
    ("-7/14", Fraction(-1, 2)),
    (5, Fraction(5)),
])
def test_parse_rational_accepts(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize("bad", ["1/0", "abc", "", "1/2/3", "0.25", "7/-14", None, 1.5, True])
def test_parse_rational_rejects(bad):
    with pytest.raises(RationalParseError):
        parse_rational(bad)


@given(rationals())
def test_rational_round_trip(x):
    s = format_rational(x)
    assert parse_rational(s) == x
    y = parse_rational(s)
    assert y.denominator > 0 and gcd(abs(y.numerator), y.denominator) == 1


def test_format_decimal_significant_digits():
    assert format_decimal(Fraction(1, 3)) == "0.333333333333"
    assert format_decimal(Fraction(2, 3), 5) == "0.66667"
    assert format_decimal(Fraction(11, 20)) == "0.55"


# ---------------------------------------------------------------------------
# Poly
# ---------------------------------------------------------------------------


def test_zero_polynomial_degree_sentinel():
    z = Poly()
    assert z.is_zero()
    assert z.degree != 0
    assert Poly([0, 0, 0]).is_zero()
    assert Poly([1, 2, 0]).degree == 1


@given(rationals(), rationals(nonzero=True), rationals())
def test_rational_identities(a, b, c):
    assert (a + b) - b == a
    assert (a * b) / b == a
    assert a * (b + c) == a * b + a * c


@given(polys(), polys(nonzero=True))
def test_poly_add_sub_mul_div_identities(a, b):
    assert (a + b) - b == a
    assert (a * b).exact_div(b) == a
    q, r = a.divmod(b)
    assert q * b + r == a
    assert r.is_zero() or r.degree < b.degree


@given(polys(4), polys(4), polys(4))
def test_poly_ring_axioms(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a


@given(polys(5), polys(5), small_rationals(20))
def test_poly_evaluation_is_a_homomorphism(a, b, x):
    assert (a * b)(x) == a(x) * b(x)
    assert (a + b)(x) == a(x) + b(x)


@given(polys(4, nonzero=True), polys(4, nonzero=True), polys(3, nonzero=True))
def test_gcd_recovers_planted_factor(a, b, g):
    d = (a * g).gcd(b * g)
    assert d.divides(a * g) and d.divides(b * g)
    assert g.monic().divides(d) if g.degree > 0 else True
    assert d.is_zero() or d.lc() == 1


@given(polys(6), small_rationals(10), st.integers(0, 8))
def test_taylor_coefficients_match_sympy(p, a, order):
    x = sympy.Symbol("x")
    expr = sym(p, x)
    got = poly_taylor_at(p, a, order)
    a_s = sympy.Rational(a.numerator, a.denominator)
    for k in range(order + 1):
        want = sympy.diff(expr, x, k).subs(x, a_s) / sympy.factorial(k)
        assert got[k] == Fraction(int(want.p), int(want.q))


@given(polys(5), polys(3))
def test_compose_matches_evaluation(p, q):
    for x in (Fraction(0), Fraction(1, 3), Fraction(-2)):
        assert p.compose(q)(x) == p(q(x))


def test_poly_render():
    assert Poly([Fraction(2, 9), Fraction(2, 3)]).to_str("n") == "(2/3)*n + 2/9"
    assert Poly([1, -1]).to_str("t") == "-t + 1"


@given(polys(6))
def test_primitive_is_integer_content_free(p):
    assume(not p.is_zero())
    q = p.primitive()
    ints = q.int_coeffs()
    g = 0
    for c in ints:
        g = gcd(g, c)
    assert g == 1 and ints[-1] > 0
    assert all(c.denominator == 1 for c in q.coeffs)


# ---------------------------------------------------------------------------
# truncated power series
# ---------------------------------------------------------------------------


@given(st.lists(small_rationals(9), min_size=1, max_size=10),
       st.lists(small_rationals(9), min_size=1, max_size=10).filter(lambda d: d[0] != 0))
def test_series_div_inverts_series_mul(a, d):
    n = 10
    q = series_div(a, d, n)
    back = series_mul(q, d, n)
    assert back == [Fraction(x) for x in (a + [0] * n)[:n]]


@given(st.lists(small_rationals(5), min_size=1, max_size=5), st.integers(0, 5))
def test_series_pow_is_repeated_product(a, e):
    n = 8
    want = [Fraction(1)] + [Fraction(0)] * (n - 1)
    for _ in range(e):
        want = series_mul(want, a, n)
    assert series_pow(a, e, n) == want


# ---------------------------------------------------------------------------
# RationalFunction
# ---------------------------------------------------------------------------


@given(rational_functions())
def test_rational_function_normal_form(f):
    assert f.den.lc() == 1
    assert f.num.gcd(f.den).degree <= 0


@given(rational_functions(5), rational_functions(5))
def test_rational_function_field_identities(f, g):
    assume(not g.num.is_zero())
    assert (f + g) - g == f
    assert (f * g) / g == f


@given(rational_functions(8))
def test_series_then_cfinite_reconstructs(f):
    L = max(f.num.degree + 1, f.den.degree, 1)
    data = rf_series(f, 2 * L + 30)
    rec = fit_cfinite(data, L)
    assert rec is not None
    assert rec.to_rational_function() == f
    # characteristic polynomial divides the reversed denominator
    assert rec.denominator().monic().divides(f.den * (1 / f.den[0]) if f.den[0] else f.den)


@given(rational_functions(5), small_rationals(10))
def test_rf_eval_matches_quotient(f, a):
    d = f.den(a)
    if d == 0:
        with pytest.raises(PoleError):
            rf_eval(f, a)
    else:
        assert rf_eval(f, a) == f.num(a) / d


def test_rf_series_geometric():
    f = RationalFunction(Poly([1]), Poly([1, Fraction(-1, 2)]))
    assert rf_series(f, 4) == [Fraction(1, 2**k) for k in range(5)]


# ---------------------------------------------------------------------------
# LaurentPoly / positive part
# ---------------------------------------------------------------------------


laurent = st.dictionaries(st.integers(-6, 6), small_rationals(9, nonzero=True), max_size=6).map(LaurentPoly)


@given(laurent, laurent)
def test_laurent_arithmetic_and_no_stored_zeros(a, b):
    s = a + b
    assert all(c != 0 for _, c in s)
    assert (a * b).at_one() == a.at_one() * b.at_one()
    assert (s - b) == a


@given(laurent, st.integers(-3, 4))
def test_positive_part_splits(a, m):
    hi, lo = a.split(m)
    assert hi + lo == a
    assert all(e >= m for e, _ in hi)
    assert all(e < m for e, _ in lo)
    assert positive_part(a, m) == hi


# ---------------------------------------------------------------------------
# resultants
# ---------------------------------------------------------------------------


@given(int_polys(4, min_deg=1), int_polys(4, min_deg=1))
def test_univariate_resultant_matches_sympy(a, b):
    x = sympy.Symbol("x")
    want = sylvester(sym(a, x), sym(b, x), x).det()
    got = det_fraction_resultant(a, b)
    assert got == Fraction(int(want.p), int(want.q))


def det_fraction_resultant(a: Poly, b: Poly) -> Fraction:
    r = resultant_poly_coeffs([Poly.const(c) for c in a.coeffs], [Poly.const(c) for c in b.coeffs])
    return r[0] if not r.is_zero() else Fraction(0)


bivar_small = st.lists(
    st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(-4, 4)), min_size=1, max_size=5
).map(BivarPoly.from_triples).filter(lambda p: p.deg_f >= 1)


@given(bivar_small, bivar_small, bivar_small)
def test_resultant_vanishes_iff_common_factor(a, b, g):
    """A planted common factor of positive ``f``-degree forces a zero resultant;
    otherwise zero happens exactly when sympy finds a nonconstant gcd in ``f``."""
    f, t = sympy.symbols("f t")

    def to_sym(p):
        return sum(int(c) * f**i * t**j for (i, j), c in p.terms.items())

    r = resultant_eliminate(a * g, b * g)
    assert r.is_zero()
    r2 = resultant_eliminate(a, b)
    common = sympy.gcd(to_sym(a), to_sym(b))
    has_common = sympy.degree(common, f) > 0
    assert r2.is_zero() == has_common


def test_resultant_eliminates_to_minimal_polynomial():
    A = BivarPoly.from_triples([(2, 0, 1), (0, 0, -2)])  # f^2 - 2
    B = BivarPoly.from_triples([(1, 0, 1), (0, 1, -1)])  # f - t
    assert resultant_eliminate(A, B).primitive() == Poly([-2, 0, 1])


def test_bareiss_determinant():
    M = [[Fraction(2), Fraction(1), Fraction(3)], [Fraction(0), Fraction(-1), Fraction(4)], [Fraction(1), Fraction(2), Fraction(0)]]
    assert det_fraction(M) == Fraction(sympy.Matrix(M).det())


# ---------------------------------------------------------------------------
# real roots and factoring
# ---------------------------------------------------------------------------


@given(st.lists(st.integers(-6, 6), min_size=1, max_size=5, unique=True))
def test_isolate_roots_of_split_polynomial(roots):
    p = Poly.from_roots([Fraction(r) for r in roots])
    ivs = isolate_real_roots(p)
    assert len(ivs) == len(roots)
    for iv in ivs:
        assert any(r in iv for r in roots)


@given(int_polys(6, min_deg=1))
def test_real_root_count_matches_sympy(p):
    x = sympy.Symbol("x")
    want = len(sympy.Poly(sym(p, x), x).real_roots(multiple=False) if False else set(sympy.real_roots(sym(p, x))))
    assert len(real_roots(p)) == want


def test_refine_root_golden_ratio():
    p = Poly([-1, -1, 1])
    iv = [r for r in real_roots(p) if r.lo > 0][0]
    fine = refine_root(p, iv, Fraction(1, 10**30))
    assert fine.width <= Fraction(1, 10**30)
    assert abs(float(fine.mid) - (1 + 5**0.5) / 2) < 1e-15


@given(int_polys(3, min_deg=1), int_polys(3, min_deg=1))
def test_factor_over_q_reassembles(a, b):
    p = a * b
    fac = factor_over_q(p)
    prod = Poly.const(1)
    for f, e in fac:
        prod = prod * f**e
    assert prod.monic() == p.monic()


def test_squarefree():
    p = Poly.from_roots([Fraction(1), Fraction(1), Fraction(2)])
    assert squarefree(p).monic() == Poly.from_roots([Fraction(1), Fraction(2)])


# ---------------------------------------------------------------------------
# linear algebra
# ---------------------------------------------------------------------------


@given(st.integers(1, 5).flatmap(lambda n: st.tuples(
    st.lists(st.lists(small_rationals(9), min_size=n, max_size=n), min_size=n, max_size=n),
    st.lists(small_rationals(9), min_size=n, max_size=n))))
def test_solve_matches_sympy(args):
    A, b = args
    M = sympy.Matrix(A)
    if M.det() == 0:
        with pytest.raises(SingularSystemError):
            solve(A, b)
        return
    x = solve(A, b)
    for row, rhs in zip(A, b):
        assert sum(a * xi for a, xi in zip(row, x)) == rhs


@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(small_rationals(5), min_size=n + 1, max_size=n + 1),
                                                      min_size=1, max_size=n)))
def test_nullspace_vectors_annihilate(rows):
    for v in nullspace(rows):
        for r in rows:
            assert sum(a * b for a, b in zip(r, v)) == 0
    R, piv = rref(rows)
    assert len(nullspace(rows)) == len(rows[0]) - len(piv)


@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(small_rationals(5), min_size=n, max_size=n),
                                                      min_size=n, max_size=n)))
def test_charpoly_matches_sympy(A):
    x = sympy.Symbol("x")
    want = sympy.Matrix(A).charpoly(x).as_expr()
    assert sympy.expand(sym(charpoly(A), x) - want) == 0


def test_identities_on_1000_random_instances():
    """(a+b)-b = a and (a*b)/b = a for rationals, polynomials and rational
    functions with numerators/denominators up to 2**64."""
    import random

    rng = random.Random(20261016)

    def q():
        return Fraction(rng.randint(-BIG, BIG), rng.randint(1, BIG))

    def p(deg):
        return Poly([q() for _ in range(deg + 1)])

    for i in range(1000):
        a, b = q(), q() or Fraction(1)
        assert (a + b) - b == a and (a * b) / b == a
        if i % 4 == 0:
            pa, pb = p(rng.randint(0, 4)), p(rng.randint(0, 4))
            assert (pa + pb) - pb == pa
            if not pb.is_zero():
                assert (pa * pb).exact_div(pb) == pa
        if i % 20 == 0:
            f = RationalFunction(p(2), p(2))
            g = RationalFunction(p(2), p(2))
            assert (f + g) - g == f
            if not g.num.is_zero():
                assert (f * g) / g == f
