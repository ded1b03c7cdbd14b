"""Dense univariate polynomials with rational coefficients."""

from __future__ import annotations

from fractions import Fraction
from math import comb, gcd, lcm
from typing import Iterable, Sequence

#: degree of the zero polynomial
ZERO_DEGREE = -1

_MOD_PRIMES = (2305843009213693951, 4611686018427387847, 9223372036854775783)


def _frac(c) -> Fraction:
    return c if type(c) is Fraction else Fraction(c)


class Poly:
    """Polynomial ``sum(coeffs[i] * x**i)``; trailing zeros are stripped.

    Instances are treated as immutable.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [_frac(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs: tuple = tuple(cs)

    @classmethod
    def _raw(cls, coeffs: list) -> "Poly":
        # caller guarantees Fractions; strips zeros only
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        p = object.__new__(cls)
        p.coeffs = tuple(coeffs)
        return p

    @classmethod
    def x(cls) -> "Poly":
        return cls((0, 1))

    @classmethod
    def const(cls, c) -> "Poly":
        return cls((c,))

    @classmethod
    def monomial(cls, k: int, c=1) -> "Poly":
        return cls([0] * k + [c])

    @classmethod
    def from_roots(cls, roots: Iterable) -> "Poly":
        out = cls((1,))
        for r in roots:
            out = out * cls((-_frac(r), 1))
        return out

    # -- basic properties -------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __getitem__(self, k: int) -> Fraction:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Fraction(0)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Poly.const(other).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"Poly({self.to_str()})"

    def to_str(self, var: str = "x") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
            if mono and c == 1:
                term = mono
            elif mono and c == -1:
                term = "-" + mono
            else:
                cs = str(c)
                if mono and c.denominator != 1:
                    cs = f"({cs})"
                term = cs + ("*" + mono if mono else "")
            parts.append(term)
        out = " + ".join(parts)
        return out.replace("+ -", "- ")

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw([-c for c in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return Poly()
            return Poly._raw([c * other for c in self.coeffs])
        if not isinstance(other, Poly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly()
        out = _mul_lists(a, b)
        return Poly._raw(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = Poly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return NotImplemented

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db = other.degree
        if len(rem) - 1 < db:
            return Poly(), self
        inv = 1 / other.lc()
        bc = other.coeffs
        quo = [Fraction(0)] * (len(rem) - db)
        for k in range(len(rem) - 1 - db, -1, -1):
            q = rem[k + db] * inv
            quo[k] = q
            if q:
                for i in range(db + 1):
                    rem[k + i] -= q * bc[i]
        return Poly._raw(quo), Poly._raw(rem[:db] if db > 0 else [])

    def __floordiv__(self, other):
        return self.divmod(self._coerce(other))[0]

    def __mod__(self, other):
        return self.divmod(self._coerce(other))[1]

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = self.divmod(other)
        if r:
            raise ArithmeticError("polynomial division is not exact")
        return q

    def divides(self, other: "Poly") -> bool:
        return not other.divmod(self)[1]

    # -- evaluation and calculus -----------------------------------------
    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "Poly":
        return Poly._raw([c * k for k, c in enumerate(self.coeffs)][1:])

    def theta(self) -> "Poly":
        """Apply ``x d/dx``."""
        return Poly._raw([c * k for k, c in enumerate(self.coeffs)])

    def compose(self, inner: "Poly") -> "Poly":
        acc = Poly()
        for c in reversed(self.coeffs):
            acc = acc * inner + c
        return acc

    def shift(self, a) -> "Poly":
        """Return ``p(x + a)``."""
        a = _frac(a)
        n = len(self.coeffs)
        if not a or n == 0:
            return self
        # Taylor shift via binomial expansion
        out = [Fraction(0)] * n
        apow = [Fraction(1)] * n
        for i in range(1, n):
            apow[i] = apow[i - 1] * a
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            for j in range(k + 1):
                out[j] += c * comb(k, j) * apow[k - j]
        return Poly._raw(out)

    def taylor_at(self, a, order: int) -> list[Fraction]:
        """Coefficients of ``(x - a)**0 .. (x - a)**order`` in the expansion of ``p``."""
        shifted = self.shift(a)
        return [shifted[k] for k in range(order + 1)]

    def truncate(self, n: int) -> "Poly":
        """Keep terms of degree < n."""
        return Poly._raw(list(self.coeffs[:n]))

    def reverse(self, degree: int | None = None) -> "Poly":
        """``x**d * p(1/x)`` with ``d`` defaulting to ``deg p``."""
        d = self.degree if degree is None else degree
        cs = list(self.coeffs) + [Fraction(0)] * (d + 1 - len(self.coeffs))
        return Poly(reversed(cs[: d + 1]))

    # -- normalization ----------------------------------------------------
    def monic(self) -> "Poly":
        if not self.coeffs:
            return self
        return self * (1 / self.lc())

    def content(self) -> Fraction:
        """Positive rational ``c`` with ``p / c`` primitive over the integers."""
        if not self.coeffs:
            return Fraction(0)
        den = 1
        for c in self.coeffs:
            den = lcm(den, c.denominator)
        g = 0
        for c in self.coeffs:
            g = gcd(g, c.numerator * (den // c.denominator))
        return Fraction(g, den)

    def primitive(self) -> "Poly":
        """Integer coefficients with gcd 1 and positive leading coefficient."""
        if not self.coeffs:
            return self
        c = self.content()
        if self.lc() < 0:
            c = -c
        return self * (1 / c)

    def int_coeffs(self) -> list[int]:
        p = self.primitive()
        return [int(c) for c in p.coeffs]

    # -- gcd --------------------------------------------------------------
    def gcd(self, other: "Poly") -> "Poly":
        """Monic greatest common divisor (zero if both are zero)."""
        return poly_gcd(self, other)

    # -- series -----------------------------------------------------------
    def inverse_series(self, n: int) -> list[Fraction]:
        """First ``n`` Maclaurin coefficients of ``1/p``."""
        if not self[0]:
            raise ZeroDivisionError("pole at origin")
        return series_div([Fraction(1)], list(self.coeffs), n)


def _mul_lists(a: Sequence, b: Sequence) -> list:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if not ai:
            continue
        for j, bj in enumerate(b):
            if bj:
                out[i + j] += ai * bj
    return out


def series_mul(a: Sequence, b: Sequence, n: int) -> list:
    """Product of two power series truncated to ``n`` terms."""
    out = [Fraction(0)] * n
    for i in range(min(len(a), n)):
        ai = a[i]
        if not ai:
            continue
        for j in range(min(len(b), n - i)):
            if b[j]:
                out[i + j] += ai * b[j]
    return out


def series_div(num: Sequence, den: Sequence, n: int) -> list:
    """``num / den`` as a power series truncated to ``n`` terms; ``den[0] != 0``."""
    d0 = Fraction(den[0])
    if not d0:
        raise ZeroDivisionError("pole at origin")
    inv = 1 / d0
    out = []
    for k in range(n):
        acc = Fraction(num[k]) if k < len(num) else Fraction(0)
        for i in range(1, min(k, len(den) - 1) + 1):
            if den[i]:
                acc -= den[i] * out[k - i]
        out.append(acc * inv)
    return out


def series_pow(a: Sequence, e: int, n: int) -> list:
    result = [Fraction(1)] + [Fraction(0)] * (n - 1)
    base = list(a[:n]) + [Fraction(0)] * max(0, n - len(a))
    while e:
        if e & 1:
            result = series_mul(result, base, n)
        e >>= 1
        if e:
            base = series_mul(base, base, n)
    return result


# -- gcd machinery ---------------------------------------------------------


def _to_mod(p: Poly, m: int) -> list[int] | None:
    out = []
    for c in p.coeffs:
        d = c.denominator % m
        if d == 0:
            return None
        out.append(c.numerator * pow(d, -1, m) % m)
    return out


def _gcd_mod(a: list[int], b: list[int], m: int) -> list[int]:
    def strip(v):
        while v and v[-1] == 0:
            v.pop()
        return v

    a, b = strip(list(a)), strip(list(b))
    while b:
        inv = pow(b[-1], -1, m)
        r = list(a)
        db = len(b) - 1
        while len(r) - 1 >= db and r:
            q = r[-1] * inv % m
            off = len(r) - 1 - db
            for i in range(db + 1):
                r[off + i] = (r[off + i] - q * b[i]) % m
            strip(r)
        a, b = b, r
    return a


def _coprime_mod(a: Poly, b: Poly) -> bool:
    """Cheap sufficient test for ``gcd(a, b) == 1`` using a word-size prime."""
    for m in _MOD_PRIMES:
        am, bm = _to_mod(a, m), _to_mod(b, m)
        if am is None or bm is None:
            continue
        if am[-1] == 0 or bm[-1] == 0:
            continue
        return len(_gcd_mod(am, bm, m)) == 1
    return False


def _prem(a: list[int], b: list[int]) -> list[int]:
    """Pseudo-remainder of integer coefficient lists (both nonzero)."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    while len(r) - 1 >= db and r:
        lr = r[-1]
        off = len(r) - 1 - db
        r = [c * lb for c in r]
        for i in range(db + 1):
            r[off + i] -= lr * b[i]
        while r and r[-1] == 0:
            r.pop()
    return r


def _primpart(v: list[int]) -> list[int]:
    g = 0
    for c in v:
        g = gcd(g, c)
    if g == 0:
        return v
    if v[-1] < 0:
        g = -g
    return [c // g for c in v]


def poly_gcd(a: Poly, b: Poly) -> Poly:
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    if a.degree == 0 or b.degree == 0:
        return Poly.const(1)
    if _coprime_mod(a, b):
        return Poly.const(1)
    # primitive remainder sequence over the integers
    x, y = a.int_coeffs(), b.int_coeffs()
    if len(x) < len(y):
        x, y = y, x
    while y:
        r = _prem(x, y)
        x, y = y, (_primpart(r) if r else r)
    return Poly(x).monic()
