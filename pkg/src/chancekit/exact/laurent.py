"""Sparse Laurent polynomials (negative exponents allowed)."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterator, Mapping


class LaurentPoly:
    """Finite map ``exponent -> coefficient`` without stored zeros.

    Coefficients may be ints or Fractions; integer coefficients keep the
    hot loop of the truncation engine cheap.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[int, object] | None = None):
        self.terms: dict = {e: c for e, c in (terms or {}).items() if c}

    @classmethod
    def _raw(cls, terms: dict) -> "LaurentPoly":
        lp = object.__new__(cls)
        lp.terms = terms
        return lp

    @classmethod
    def from_steps(cls, faces) -> "LaurentPoly":
        """Die probability generating function ``sum p * x**step``."""
        out: dict = {}
        for step, prob in faces:
            out[step] = out.get(step, 0) + prob
        return cls(out)

    def __repr__(self) -> str:
        body = " + ".join(f"{c}*x^{e}" for e, c in sorted(self.terms.items()))
        return f"LaurentPoly({body or '0'})"

    def __eq__(self, other) -> bool:
        if isinstance(other, LaurentPoly):
            return self.terms == other.terms
        return NotImplemented

    def __iter__(self) -> Iterator[tuple[int, object]]:
        return iter(sorted(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __getitem__(self, e: int):
        return self.terms.get(e, 0)

    @property
    def min_exponent(self) -> int | None:
        return min(self.terms) if self.terms else None

    @property
    def max_exponent(self) -> int | None:
        return max(self.terms) if self.terms else None

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return LaurentPoly._raw(out)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly._raw({e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other) -> "LaurentPoly":
        if not isinstance(other, LaurentPoly):
            if not other:
                return LaurentPoly()
            return LaurentPoly._raw({e: c * other for e, c in self.terms.items()})
        out: dict = {}
        get = out.get
        for e2, c2 in other.terms.items():
            for e1, c1 in self.terms.items():
                k = e1 + e2
                out[k] = get(k, 0) + c1 * c2
        return LaurentPoly._raw({e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def evaluate(self, x):
        return sum((c * Fraction(x) ** e for e, c in self.terms.items()), Fraction(0))

    def at_one(self):
        """Sum of coefficients."""
        return sum(self.terms.values(), 0)

    def split(self, m: int) -> tuple["LaurentPoly", "LaurentPoly"]:
        """``(part with exponent >= m, part with exponent < m)``."""
        hi, lo = {}, {}
        for e, c in self.terms.items():
            (hi if e >= m else lo)[e] = c
        return LaurentPoly._raw(hi), LaurentPoly._raw(lo)


NO_CUTOFF = None


def positive_part(p: LaurentPoly, m: int | None = 1) -> LaurentPoly:
    """Terms of ``p`` with exponent ``>= m``; ``m=None`` keeps everything."""
    if m is NO_CUTOFF:
        return p
    return p.split(m)[0]
