"""Arithmetic in ``Q(alpha) = Q[x]/(g)`` for an irreducible ``g``, with a chosen real embedding."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..exact.linalg import charpoly
from ..exact.poly import Poly
from ..exact.roots import RootInterval, factor_over_q, real_roots, refine_root, squarefree


def _xgcd_inverse(a: Poly, g: Poly) -> Poly:
    """``a**-1 mod g`` by the extended Euclidean algorithm."""
    r0, r1 = g, a % g
    s0, s1 = Poly(), Poly.const(1)
    while not r1.is_zero():
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
    if r0.degree != 0:
        raise ZeroDivisionError("element is not invertible modulo the defining polynomial")
    return (s0 * (1 / r0.lc())) % g


@dataclass(frozen=True)
class NumberField:
    """``Q[x]/(g)`` together with an isolating interval for the real root ``alpha``."""

    g: Poly
    root: RootInterval

    @classmethod
    def rational(cls) -> "NumberField":
        return cls(Poly((0, 1)), RootInterval(Fraction(0), Fraction(0)))

    @property
    def degree(self) -> int:
        return self.g.degree

    def reduce(self, a) -> Poly:
        if not isinstance(a, Poly):
            a = Poly.const(a)
        return a % self.g if self.g.degree >= 1 else a

    def mul(self, a: Poly, b: Poly) -> Poly:
        return self.reduce(a * b)

    def inv(self, a: Poly) -> Poly:
        if self.g.degree == 1:
            return Poly.const(1 / self.reduce(a)[0])
        return _xgcd_inverse(a, self.g)

    def alpha(self) -> Poly:
        if self.g.degree == 1:
            return Poly.const(-self.g[0] / self.g[1])
        return Poly.x()

    def refined(self, width) -> "NumberField":
        if self.g.degree <= 1:
            return self
        return NumberField(self.g, refine_root(self.g, self.root, width))

    def approx(self, a: Poly, width=Fraction(1, 10**40)) -> Fraction:
        """Value of ``a`` at (a rational approximation of) ``alpha``."""
        if self.g.degree <= 1:
            return self.reduce(a)[0]
        return a(self.refined(width).root.mid)

    def mult_matrix(self, a: Poly) -> list[list[Fraction]]:
        """Matrix of ``y -> a*y`` on the basis ``1, x, ..., x**(n-1)``."""
        n = max(self.g.degree, 1)
        cols = []
        for i in range(n):
            v = self.reduce(a * Poly.monomial(i))
            cols.append([v[k] for k in range(n)])
        return [[cols[j][i] for j in range(n)] for i in range(n)]

    def minimal_polynomial(self, a: Poly) -> tuple[Poly, RootInterval]:
        """Integer minimal polynomial of ``a`` and an interval isolating its value.

        The characteristic polynomial of multiplication by ``a`` is a power of
        the minimal polynomial; its irreducible factor vanishing at the
        embedded value is selected.
        """
        a = self.reduce(a)
        if a.degree <= 0:
            c = a[0]
            return Poly((-c, 1)).primitive(), RootInterval(c, c)
        cp = charpoly(self.mult_matrix(a))
        target = self.approx(a)
        best = None
        for f, _ in factor_over_q(squarefree(cp)):
            if f.degree < 1:
                continue
            for iv in real_roots(f, Fraction(1, 10**30)):
                d = abs(iv.mid - target)
                if best is None or d < best[0]:
                    best = (d, f, iv)
        if best is None:
            raise ArithmeticError("element has no real embedding")
        return best[1].primitive(), best[2]
