"""Rational functions over Q in one variable."""

from __future__ import annotations

from fractions import Fraction

from .poly import Poly, series_div


class PoleError(ZeroDivisionError):
    pass


class RationalFunction:
    """``num / den`` kept in lowest terms with a monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, *, reduced: bool = False):
        num = num if isinstance(num, Poly) else Poly(num) if isinstance(num, (list, tuple)) else Poly.const(num)
        if den is None:
            den = Poly.const(1)
        elif not isinstance(den, Poly):
            den = Poly(den) if isinstance(den, (list, tuple)) else Poly.const(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            self.num, self.den = Poly(), Poly.const(1)
            return
        if not reduced:
            g = num.gcd(den)
            if g.degree > 0:
                num, den = num.exact_div(g), den.exact_div(g)
        lc = den.lc()
        if lc != 1:
            num, den = num * (1 / lc), den * (1 / lc)
        self.num, self.den = num, den

    @classmethod
    def from_poly(cls, p: Poly) -> "RationalFunction":
        return cls(p, Poly.const(1), reduced=True)

    def __repr__(self) -> str:
        return f"RationalFunction(({self.num.to_str('t')}) / ({self.den.to_str('t')}))"

    def __eq__(self, other) -> bool:
        if isinstance(other, RationalFunction):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (Poly, int, Fraction)):
            return self == RationalFunction(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, (Poly, int, Fraction)):
            return RationalFunction(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, reduced=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.num.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __call__(self, a):
        return rf_eval(self, a)

    def derivative(self) -> "RationalFunction":
        n, d = self.num, self.den
        return RationalFunction(n.derivative() * d - n * d.derivative(), d * d)

    def series(self, K: int) -> list[Fraction]:
        return rf_series(self, K)

    def taylor_at(self, a, order: int) -> list[Fraction]:
        """Coefficients of ``(t - a)**0..order`` of the expansion around ``a``."""
        d = self.den.taylor_at(a, order)
        if not d[0]:
            raise PoleError("pole at expansion point")
        return series_div(self.num.taylor_at(a, order), d, order + 1)


def rf_series(f: RationalFunction, K: int) -> list[Fraction]:
    """Maclaurin coefficients of ``f`` for ``t**0 .. t**K``.

    Unrolls the linear recurrence given by the denominator.
    """
    if not f.den[0]:
        raise PoleError("pole at origin")
    return series_div(list(f.num.coeffs), list(f.den.coeffs), K + 1)


def rf_eval(f: RationalFunction, a) -> Fraction:
    a = Fraction(a)
    d = f.den(a)
    if not d:
        raise PoleError(f"pole at evaluation point {a}")
    return Fraction(f.num(a)) / d


def poly_taylor_at(p: Poly, a, order: int) -> list[Fraction]:
    return p.taylor_at(a, order)
