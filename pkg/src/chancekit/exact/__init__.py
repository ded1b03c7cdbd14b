"""Exact arithmetic carriers: rationals, polynomials, rational functions, Laurent and bivariate polynomials."""

from .laurent import NO_CUTOFF, LaurentPoly, positive_part
from .mpoly import BivarPoly, MPoly
from .poly import ZERO_DEGREE, Poly, series_div, series_mul, series_pow
from .ratfunc import PoleError, RationalFunction, poly_taylor_at, rf_eval, rf_series
from .rational import (
    RationalParseError,
    common_denominator,
    format_decimal,
    format_rational,
    parse_rational,
    to_decimal,
)
from .resultant import EliminationError, resultant_eliminate

__all__ = [
    "BivarPoly",
    "EliminationError",
    "LaurentPoly",
    "MPoly",
    "NO_CUTOFF",
    "PoleError",
    "Poly",
    "RationalFunction",
    "RationalParseError",
    "ZERO_DEGREE",
    "common_denominator",
    "format_decimal",
    "format_rational",
    "parse_rational",
    "poly_taylor_at",
    "positive_part",
    "resultant_eliminate",
    "rf_eval",
    "rf_series",
    "series_div",
    "series_mul",
    "series_pow",
    "to_decimal",
]
