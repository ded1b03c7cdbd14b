"""Closed-form families: Catalan and Fuss-Catalan first passages."""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import comb, factorial


def fuss_catalan_coeff(k: int, m: int) -> int:
    """``C_{k,m} = ((k+1)m)! / (m! (km+1)!)``, the number of (1,-k) Dyck words with ``m`` down-steps."""
    if k < 1 or m < 0:
        raise ValueError("need k >= 1 and m >= 0")
    return factorial((k + 1) * m) // (factorial(m) * factorial(k * m + 1))


def fuss_catalan_binomial(k: int, m: int) -> int:
    """Same numbers through ``C((k+1)m, m) / (km + 1)``."""
    return comb((k + 1) * m, m) // (k * m + 1)


def count_dyck_words(k: int, m: int) -> int:
    """Brute force: words over ``{+1, -k}`` with ``m`` copies of ``-k`` and ``k*m`` copies
    of ``+1``, summing to 0, all of whose partial sums are nonpositive."""
    n = (k + 1) * m
    count = 0
    for word in product((1, -k), repeat=n):
        if word.count(-k) != m:
            continue
        s = 0
        for step in word:
            s += step
            if s > 0:
                break
        else:
            count += s == 0
    return count


def count_first_passage_words(k: int, m: int) -> int:
    """Brute force over words of length ``(k+1)m + 1`` that sum to 1 and whose proper
    prefixes are all nonpositive; by the cycle lemma this is ``C_{k,m}``."""
    n = (k + 1) * m + 1
    count = 0
    for word in product((1, -k), repeat=n):
        if sum(word) != 1:
            continue
        s = 0
        ok = True
        for step in word[:-1]:
            s += step
            if s > 0:
                ok = False
                break
        count += ok
    return count


def first_passage_prob_oracle(n: int, m: int, p) -> Fraction:
    """Probability that the {+1 w.p. p, -1} walk first reaches ``m`` at round ``2n + m``."""
    if n < 0 or m < 1:
        raise ValueError("need n >= 0 and m >= 1")
    p = Fraction(p)
    return Fraction(m * factorial(2 * n + m - 1), factorial(n) * factorial(n + m)) * p ** (n + m) * (1 - p) ** n


def fuss_first_passage_prob(k: int, n: int, m: int, p) -> Fraction:
    """Probability that the {+1 w.p. p, -k} walk first reaches ``m`` after ``n`` losing rounds,
    i.e. at round ``(k+1)n + m``."""
    if n < 0 or m < 1 or k < 1:
        raise ValueError("need k >= 1, n >= 0 and m >= 1")
    p = Fraction(p)
    L = (k + 1) * n + m
    return Fraction(m, L) * comb(L, n) * p ** (k * n + m) * (1 - p) ** n


def fuss_first_passage_float(k: int, n: int, m: int, p: float, mp=None):
    """Same probability in floating point (``mpmath`` when ``mp`` is given), for long sums."""
    import mpmath

    ctx = mp or mpmath.mp
    L = (k + 1) * n + m
    logv = (ctx.log(m) - ctx.log(L) + ctx.loggamma(L + 1) - ctx.loggamma(n + 1) - ctx.loggamma(L - n + 1)
            + (k * n + m) * ctx.log(p) + n * ctx.log(1 - p))
    return ctx.exp(logv)
