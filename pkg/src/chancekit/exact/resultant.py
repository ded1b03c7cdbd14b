"""Resultants via Sylvester determinants.

The core routine evaluates the Sylvester determinant with fraction-free
(Bareiss) elimination over Q[t].  Extra carried variables are handled by
evaluation at integer points followed by interpolation, using the standard
degree bound for resultants.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Sequence

from .mpoly import BivarPoly, MPoly
from .poly import Poly


class EliminationError(ValueError):
    pass


def sylvester_matrix(a: Sequence, b: Sequence, zero) -> list[list]:
    """Sylvester matrix of ``a`` and ``b`` given as coefficient lists, lowest degree first.

    Formal degrees are ``len(a) - 1`` and ``len(b) - 1``; the leading entries may vanish.
    """
    m, n = len(a) - 1, len(b) - 1
    size = m + n
    rows = []
    ha, hb = list(reversed(a)), list(reversed(b))
    for i in range(n):
        rows.append([zero] * i + ha + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + hb + [zero] * (size - n - 1 - i))
    return rows


def bareiss_det(matrix: list[list], exact_div: Callable, zero, one):
    """Fraction-free determinant; ``exact_div(x, y)`` must divide exactly in the ring."""
    n = len(matrix)
    if n == 0:
        return one
    m = [list(r) for r in matrix]
    sign = 1
    prev = one
    for k in range(n - 1):
        if _is_zero(m[k][k]):
            for r in range(k + 1, n):
                if not _is_zero(m[r][k]):
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return zero
        piv = m[k][k]
        rk = m[k]
        for i in range(k + 1, n):
            ri = m[i]
            a = ri[k]
            for j in range(k + 1, n):
                ri[j] = exact_div(piv * ri[j] - a * rk[j], prev)
            ri[k] = zero
        prev = piv
    det = m[n - 1][n - 1]
    return -det if sign < 0 else det


def _is_zero(x) -> bool:
    if isinstance(x, Poly):
        return x.is_zero()
    return not x


def det_fraction(matrix: list[list]) -> Fraction:
    """Determinant over Q by Gaussian elimination."""
    n = len(matrix)
    m = [[Fraction(x) for x in r] for r in matrix]
    det = Fraction(1)
    for k in range(n):
        p = next((r for r in range(k, n) if m[r][k]), None)
        if p is None:
            return Fraction(0)
        if p != k:
            m[k], m[p] = m[p], m[k]
            det = -det
        piv = m[k][k]
        det *= piv
        inv = 1 / piv
        for i in range(k + 1, n):
            f = m[i][k] * inv
            if f:
                rk, ri = m[k], m[i]
                for j in range(k + 1, n):
                    if rk[j]:
                        ri[j] -= f * rk[j]
    return det


def resultant_poly_coeffs(a: Sequence[Poly], b: Sequence[Poly]) -> Poly:
    """Resultant of ``sum a_i(t) y**i`` and ``sum b_i(t) y**i`` with respect to ``y``."""
    mat = sylvester_matrix(list(a), list(b), Poly())
    return bareiss_det(mat, lambda x, y: x.exact_div(y), Poly(), Poly.const(1))


def resultant_eliminate(A: BivarPoly, B: BivarPoly, var: str | None = None):
    """Eliminate ``var`` (default: the first variable) from ``A`` and ``B``.

    Bivariate inputs give a ``Poly`` in the remaining variable.  Inputs over
    more variables give an ``MPoly`` in the remaining ones.
    """
    if A.names != B.names:
        raise ValueError("variable mismatch")
    var = var or A.names[0]
    if A.is_zero() or B.is_zero():
        raise EliminationError("zero polynomial")
    if A.degree(var) < 1 or B.degree(var) < 1:
        raise EliminationError(f"nothing to eliminate: degree zero in {var}")
    rest = tuple(v for v in A.names if v != var)
    if len(rest) == 1:
        ca = [c.to_poly() for c in _univariate_coeffs(A, var)]
        cb = [c.to_poly() for c in _univariate_coeffs(B, var)]
        return resultant_poly_coeffs(ca, cb)
    return _resultant_interp(A, B, var)


def _univariate_coeffs(P: MPoly, var: str) -> list[MPoly]:
    return P.coefficients_in(var)


def _resultant_interp(A: MPoly, B: MPoly, var: str) -> MPoly:
    return _resultant_interp_padded(A, B, var, A.degree(var), B.degree(var))


def _padded(P: MPoly, var: str, deg: int) -> list[Poly]:
    cs = [c.to_poly() for c in P.coefficients_in(var)]
    return cs + [Poly()] * (deg + 1 - len(cs))


def _resultant_interp_padded(A: MPoly, B: MPoly, var: str, m: int, n: int) -> MPoly:
    rest = tuple(v for v in A.names if v != var)
    x = rest[-1]
    bound = n * max(A.degree(x), 0) + m * max(B.degree(x), 0)
    samples = []
    for i in range(bound + 1):
        Ai, Bi = A.subs(x, i), B.subs(x, i)
        if len(rest) == 2:
            val = resultant_poly_coeffs(_padded(Ai, var, m), _padded(Bi, var, n))
            samples.append(MPoly((rest[0],), {(k,): c for k, c in enumerate(val.coeffs)}))
        else:
            samples.append(_resultant_interp_padded(Ai, Bi, var, m, n))
    return _interpolate(samples, rest, x)


def _interpolate(samples: list[MPoly], names: tuple, x: str) -> MPoly:
    """Lagrange interpolation at ``x = 0, 1, ..., len(samples) - 1``."""
    k = names.index(x)
    npts = len(samples)
    out: dict = {}
    pts = list(range(npts))
    for i, val in enumerate(samples):
        if val.is_zero():
            continue
        basis = Poly.const(1)
        denom = Fraction(1)
        for j in pts:
            if j != i:
                basis = basis * Poly((-j, 1))
                denom *= i - j
        basis = basis * (1 / denom)
        for e, c in val.terms.items():
            for d, bc in enumerate(basis.coeffs):
                if bc:
                    e2 = e[:k] + (d,) + e[k:]
                    out[e2] = out.get(e2, 0) + c * bc
    terms = {e: c for e, c in out.items() if c}
    if len(names) == 2:
        return BivarPoly(terms, names)
    return MPoly(names, terms)
