"""Sparse multivariate polynomials over Q, and the bivariate ``P(f, t)`` case."""

from __future__ import annotations

from fractions import Fraction
from math import comb, gcd, lcm
from typing import Iterable, Mapping, Sequence

from .poly import Poly, series_mul


class MPoly:
    """Map from exponent tuples to nonzero Fractions over named variables."""

    __slots__ = ("names", "terms")

    def __init__(self, names: Sequence[str], terms: Mapping[tuple, object] | None = None):
        self.names = tuple(names)
        n = len(self.names)
        out = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != n:
                raise ValueError(f"exponent {e} does not match variables {self.names}")
            c = Fraction(c)
            if c:
                out[e] = out.get(e, 0) + c
        self.terms = {e: c for e, c in out.items() if c}

    @classmethod
    def _raw(cls, names, terms: dict):
        p = object.__new__(cls)
        p.names = names
        p.terms = terms
        return p

    def _like(self, terms: dict):
        return type(self)._raw(self.names, terms)

    @classmethod
    def var(cls, names: Sequence[str], name: str):
        names = tuple(names)
        e = tuple(1 if v == name else 0 for v in names)
        return cls._raw(names, {e: Fraction(1)})

    @classmethod
    def const(cls, names: Sequence[str], c):
        names = tuple(names)
        c = Fraction(c)
        return cls._raw(names, {(0,) * len(names): c} if c else {})

    # -- structure -------------------------------------------------------
    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.to_str()})"

    def __eq__(self, other) -> bool:
        if isinstance(other, MPoly):
            return self.names == other.names and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == self.const(self.names, other).terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.names, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def index(self, name: str) -> int:
        return self.names.index(name)

    def degree(self, name: str) -> int:
        k = self.index(name)
        return max((e[k] for e in self.terms), default=-1)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def sorted_terms(self) -> list[tuple[tuple, Fraction]]:
        """Terms in graded-lex order, largest first."""
        return sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), kv[0]), reverse=True)

    def leading_coefficient(self) -> Fraction:
        st = self.sorted_terms()
        return st[0][1] if st else Fraction(0)

    def to_str(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                (v if k == 1 else f"{v}^{k}") for v, k in zip(self.names, e) if k
            )
            if mono and c == 1:
                parts.append(mono)
            elif mono and c == -1:
                parts.append("-" + mono)
            else:
                cs = str(c) if c.denominator == 1 or not mono else f"({c})"
                parts.append(cs + ("*" + mono if mono else ""))
        return " + ".join(parts).replace("+ -", "- ")

    # -- arithmetic ------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, MPoly):
            if other.names != self.names:
                raise ValueError("variable mismatch")
            return other
        if isinstance(other, (int, Fraction)):
            return self.const(self.names, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return self._like(out)

    __radd__ = __add__

    def __neg__(self):
        return self._like({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            if not other:
                return self._like({})
            return self._like({e: c * other for e, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return self._like({e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = self.const(self.names, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, c):
        return self * (1 / Fraction(c))

    # -- calculus and substitution ----------------------------------------
    def diff(self, name: str):
        k = self.index(name)
        out = {}
        for e, c in self.terms.items():
            if e[k]:
                e2 = e[:k] + (e[k] - 1,) + e[k + 1:]
                out[e2] = c * e[k]
        return self._like(out)

    def subs(self, name: str, value) -> "MPoly":
        """Substitute a number for one variable; the variable is dropped."""
        k = self.index(name)
        value = Fraction(value)
        names = self.names[:k] + self.names[k + 1:]
        out: dict = {}
        for e, c in self.terms.items():
            e2 = e[:k] + e[k + 1:]
            out[e2] = out.get(e2, 0) + c * value ** e[k]
        return MPoly(names, out) if len(names) != 2 else BivarPoly._from_terms(names, out)

    def evaluate(self, values: Mapping[str, object]) -> Fraction:
        acc = Fraction(0)
        vals = [Fraction(values[v]) for v in self.names]
        for e, c in self.terms.items():
            term = c
            for v, k in zip(vals, e):
                if k:
                    term *= v ** k
            acc += term
        return acc

    def coefficients_in(self, name: str) -> list["MPoly"]:
        """Coefficients with respect to ``name`` as polynomials in the remaining variables."""
        k = self.index(name)
        names = self.names[:k] + self.names[k + 1:]
        deg = self.degree(name)
        buckets: list[dict] = [{} for _ in range(deg + 1)]
        for e, c in self.terms.items():
            buckets[e[k]][e[:k] + e[k + 1:]] = c
        return [MPoly._raw(names, b) if len(names) != 2 else BivarPoly._raw(names, b) for b in buckets]

    def to_poly(self) -> Poly:
        """Univariate view (requires exactly one variable)."""
        if len(self.names) != 1:
            raise ValueError("not univariate")
        deg = self.degree(self.names[0])
        cs = [Fraction(0)] * (deg + 1)
        for (k,), c in self.terms.items():
            cs[k] = c
        return Poly(cs)

    def shift(self, name: str, a) -> "MPoly":
        """Substitute ``name -> name + a``."""
        k = self.index(name)
        a = Fraction(a)
        out: dict = {}
        for e, c in self.terms.items():
            n = e[k]
            for j in range(n + 1):
                e2 = e[:k] + (j,) + e[k + 1:]
                out[e2] = out.get(e2, 0) + c * comb(n, j) * a ** (n - j)
        return self._like({e: c for e, c in out.items() if c})

    def rename(self, names: Sequence[str]):
        return type(self)._raw(tuple(names), dict(self.terms))

    # -- normalization -----------------------------------------------------
    def content_normalized(self):
        """Integer coefficients with gcd 1 and positive graded-lex leading coefficient."""
        if not self.terms:
            return self
        den = 1
        for c in self.terms.values():
            den = lcm(den, c.denominator)
        g = 0
        for c in self.terms.values():
            g = gcd(g, c.numerator * (den // c.denominator))
        scale = Fraction(den, g)
        if self.leading_coefficient() < 0:
            scale = -scale
        return self * scale

    def proportional_to(self, other: "MPoly") -> bool:
        """True iff ``self = c * other`` for a nonzero rational ``c``."""
        if self.names != other.names:
            return False
        if set(self.terms) != set(other.terms) or not self.terms:
            return False
        return self.content_normalized() == other.content_normalized()


class BivarPoly(MPoly):
    """``sum c_ij f**i t**j``; exponent pairs are ``(i, j)``."""

    __slots__ = ()

    def __init__(self, terms: Mapping[tuple, object] | None = None, names: Sequence[str] = ("f", "t")):
        super().__init__(names, terms)

    @classmethod
    def _from_terms(cls, names, terms):
        return cls(terms, names)

    @classmethod
    def from_triples(cls, triples: Iterable, names: Sequence[str] = ("f", "t")) -> "BivarPoly":
        out: dict = {}
        for i, j, c in triples:
            out[(i, j)] = out.get((i, j), 0) + Fraction(c)
        return cls(out, names)

    @classmethod
    def from_coeff_polys(cls, polys: Sequence[Poly], names: Sequence[str] = ("f", "t")) -> "BivarPoly":
        """Build from ``[c_0(t), c_1(t), ...]`` meaning ``sum c_i(t) f**i``."""
        out = {}
        for i, p in enumerate(polys):
            for j, c in enumerate(p.coeffs):
                if c:
                    out[(i, j)] = c
        return cls(out, names)

    @classmethod
    def f(cls):
        return cls({(1, 0): 1})

    @classmethod
    def t(cls):
        return cls({(0, 1): 1})

    @property
    def deg_f(self) -> int:
        return max((e[0] for e in self.terms), default=-1)

    @property
    def deg_t(self) -> int:
        return max((e[1] for e in self.terms), default=-1)

    def triples(self) -> list[tuple[int, int, Fraction]]:
        return [(i, j, c) for (i, j), c in sorted(self.terms.items())]

    def coeff_polys(self) -> list[Poly]:
        """``[c_0(t), ..., c_d(t)]`` with ``P = sum c_i(t) f**i``."""
        d = self.deg_f
        cols = [[Fraction(0)] * (self.deg_t + 1) for _ in range(d + 1)]
        for (i, j), c in self.terms.items():
            cols[i][j] = c
        return [Poly(c) for c in cols]

    def coeff_polys_t(self) -> list[Poly]:
        """``[d_0(f), ..., d_e(f)]`` with ``P = sum d_j(f) t**j``."""
        rows = [[Fraction(0)] * (self.deg_f + 1) for _ in range(self.deg_t + 1)]
        for (i, j), c in self.terms.items():
            rows[j][i] = c
        return [Poly(r) for r in rows]

    def at_t(self, a) -> Poly:
        """``P(f, a)`` as a polynomial in ``f``."""
        a = Fraction(a)
        cs = [Fraction(0)] * (self.deg_f + 1)
        for (i, j), c in self.terms.items():
            cs[i] += c * a ** j
        return Poly(cs)

    def at_f(self, a) -> Poly:
        """``P(a, t)`` as a polynomial in ``t``."""
        a = Fraction(a)
        cs = [Fraction(0)] * (self.deg_t + 1)
        for (i, j), c in self.terms.items():
            cs[j] += c * a ** i
        return Poly(cs)

    def __call__(self, f, t):
        return self.evaluate({self.names[0]: f, self.names[1]: t})

    def substitute_series(self, series: Sequence, n: int) -> list[Fraction]:
        """Coefficients ``t**0..t**(n-1)`` of ``P(f(t), t)``."""
        out = [Fraction(0)] * n
        s = [Fraction(c) for c in series[:n]] + [Fraction(0)] * max(0, n - len(series))
        power = [Fraction(1)] + [Fraction(0)] * (n - 1)
        polys = self.coeff_polys()
        for i, ci in enumerate(polys):
            if i:
                power = series_mul(power, s, n)
            if ci.is_zero():
                continue
            for j, c in enumerate(ci.coeffs):
                if not c:
                    continue
                for k in range(n - j):
                    if power[k]:
                        out[k + j] += c * power[k]
        return out

    def swap(self) -> "BivarPoly":
        return BivarPoly({(j, i): c for (i, j), c in self.terms.items()}, (self.names[1], self.names[0]))

    def normalized(self) -> "BivarPoly":
        return self.content_normalized()
