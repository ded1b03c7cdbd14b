"""Parsing and rendering of exact rationals.

``fractions.Fraction`` is the rational type used throughout the package; it
keeps numerator and denominator coprime with a positive denominator.
"""

from __future__ import annotations

import re
from decimal import Decimal, localcontext
from fractions import Fraction
from math import lcm

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


class RationalParseError(ValueError):
    """Raised when a string is not a valid ``p/q`` rational."""


def parse_rational(value) -> Fraction:
    """Parse ``"p/q"``, ``"p"``, an int or a Fraction into a Fraction.

    Floats are rejected on purpose: they are not exact.
    """
    if isinstance(value, bool):
        raise RationalParseError(f"not a rational: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if not isinstance(value, str):
        raise RationalParseError(f"expected a 'p/q' string, got {type(value).__name__}")
    m = _RATIONAL_RE.match(value)
    if m is None:
        raise RationalParseError(f"not a rational: {value!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise RationalParseError(f"zero denominator in {value!r}")
    return Fraction(num, den)


def format_rational(x) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def to_decimal(x, digits: int = 30) -> Decimal:
    """Exact rational to a Decimal carrying ``digits`` significant digits."""
    x = Fraction(x)
    with localcontext() as ctx:
        ctx.prec = digits
        return Decimal(x.numerator) / Decimal(x.denominator)


def format_decimal(x, digits: int = 12) -> str:
    """Render a real number (rational, Decimal, float or mpf) to ``digits`` significant digits."""
    if isinstance(x, (int, Fraction)):
        d = to_decimal(x, digits + 5)
    elif isinstance(x, Decimal):
        d = x
    else:
        d = Decimal(str(x))
    return format(d, f".{digits}g")


def common_denominator(values) -> int:
    """Least common multiple of the denominators of ``values``."""
    out = 1
    for v in values:
        out = lcm(out, Fraction(v).denominator)
    return out
