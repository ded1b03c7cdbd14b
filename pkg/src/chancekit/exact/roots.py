"""Real roots of exact polynomials: Sturm counting, bisection, factoring over Q."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import sympy

from .poly import Poly


@dataclass(frozen=True)
class RootInterval:
    """Open-closed interval ``(lo, hi]`` containing exactly one real root."""

    lo: Fraction
    hi: Fraction

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi


def squarefree(p: Poly) -> Poly:
    g = p.gcd(p.derivative())
    return p.exact_div(g) if g.degree > 0 else p


def sturm_sequence(p: Poly) -> list[Poly]:
    seq = [p, p.derivative()]
    while not seq[-1].is_zero():
        r = seq[-2] % seq[-1]
        if r.is_zero():
            break
        seq.append(-r)
    return seq


def _sign_changes(seq: list[Poly], x: Fraction) -> int:
    prev = 0
    count = 0
    for q in seq:
        v = q(x)
        if v:
            s = 1 if v > 0 else -1
            if prev and s != prev:
                count += 1
            prev = s
    return count


def root_bound(p: Poly) -> Fraction:
    """Cauchy bound: every complex root has modulus < the returned value."""
    lc = abs(p.lc())
    return 1 + max((abs(c) / lc for c in p.coeffs[:-1]), default=Fraction(0))


def isolate_real_roots(p: Poly) -> list[RootInterval]:
    """Disjoint intervals, one per distinct real root, sorted increasingly."""
    if p.degree < 1:
        return []
    q = squarefree(p)
    seq = sturm_sequence(q)
    b = root_bound(q)
    out: list[RootInterval] = []
    stack = [(-b, b)]
    while stack:
        lo, hi = stack.pop()
        n = _sign_changes(seq, lo) - _sign_changes(seq, hi)
        if n == 0:
            continue
        if n == 1:
            out.append(RootInterval(lo, hi))
            continue
        mid = (lo + hi) / 2
        stack.append((lo, mid))
        stack.append((mid, hi))
    return sorted(out, key=lambda r: r.lo)


def refine_root(p: Poly, iv: RootInterval, width) -> RootInterval:
    """Bisect ``iv`` (which holds exactly one root of squarefree ``p``) down to ``width``."""
    q = squarefree(p)
    lo, hi = iv.lo, iv.hi
    if not q(hi):
        return RootInterval(hi, hi)
    shi = q(hi) > 0
    width = Fraction(width)
    while hi - lo > width:
        mid = (lo + hi) / 2
        v = q(mid)
        if not v:
            return RootInterval(mid, mid)
        if (v > 0) == shi:
            hi = mid
        else:
            lo = mid
    return RootInterval(lo, hi)


def real_roots(p: Poly, width=Fraction(1, 10**15)) -> list[RootInterval]:
    return [refine_root(p, iv, width) for iv in isolate_real_roots(p)]


def nearest_real_root(p: Poly, estimate: float, width=Fraction(1, 10**15)) -> RootInterval:
    """The real root of ``p`` closest to a numeric ``estimate``, refined to ``width``."""
    roots = real_roots(p, width)
    if not roots:
        raise ValueError("polynomial has no real roots")
    return min(roots, key=lambda r: abs(float(r.mid) - estimate))


def factor_over_q(p: Poly) -> list[tuple[Poly, int]]:
    """Irreducible factors over Q (primitive, positive leading coefficient) with multiplicities."""
    x = sympy.Symbol("x")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * x**i for i, c in enumerate(p.coeffs))
    _, factors = sympy.factor_list(expr, x)
    out = []
    for f, mult in factors:
        coeffs = sympy.Poly(f, x).all_coeffs()[::-1]
        out.append((Poly([Fraction(int(c.p), int(c.q)) for c in coeffs]).primitive(), int(mult)))
    return out


def minimal_factor(p: Poly, estimate: float, tol: float = 1e-6) -> Poly:
    """Irreducible factor of ``p`` having a real root within ``tol`` of ``estimate``."""
    best = None
    for f, _ in factor_over_q(p):
        if f.degree < 1:
            continue
        for iv in real_roots(f, Fraction(1, 10**12)):
            d = abs(float(iv.mid) - estimate)
            if best is None or d < best[0]:
                best = (d, f)
    if best is None or best[0] > tol:
        raise ValueError(f"no factor has a root near {estimate}")
    return best[1]
