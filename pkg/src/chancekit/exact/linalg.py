"""Exact linear algebra over Q: elimination, nullspaces, characteristic polynomials."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .poly import Poly


class SingularSystemError(ArithmeticError):
    pass


def _fmatrix(rows: Sequence[Sequence]) -> list[list[Fraction]]:
    return [[c if type(c) is Fraction else Fraction(c) for c in r] for r in rows]


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and the pivot columns."""
    m = _fmatrix(rows)
    if not m:
        return m, []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        row = [x * inv if x else x for x in m[r]]
        m[r] = row
        nz = [j for j in range(c, ncols) if row[j]]
        for i in range(len(m)):
            if i != r:
                f = m[i][c]
                if f:
                    ri = m[i]
                    for j in nz:
                        ri[j] -= f * row[j]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def nullspace(rows: Sequence[Sequence], ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of ``{x : A x = 0}``, one vector per free column."""
    if not rows:
        if ncols is None:
            raise ValueError("ncols required for an empty matrix")
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    ncols = len(rows[0])
    red, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for row, pc in zip(red, pivots):
            v[pc] = -row[fc]
        basis.append(v)
    return basis


class LUFactor:
    """Gaussian elimination with partial (nonzero) pivoting, reusable for many right-hand sides."""

    def __init__(self, matrix: Sequence[Sequence]):
        a = _fmatrix(matrix)
        n = len(a)
        if any(len(r) != n for r in a):
            raise ValueError("square matrix required")
        perm = list(range(n))
        # replayed in order by solve(): swaps[k] is the pivot row chosen at step k,
        # ops[k] its sparse multipliers (i, factor) in row positions after that swap
        swaps: list[int] = []
        ops: list[list[tuple[int, Fraction]]] = []
        for k in range(n):
            p = next((i for i in range(k, n) if a[i][k]), None)
            if p is None:
                raise SingularSystemError("singular matrix")
            if p != k:
                a[k], a[p] = a[p], a[k]
                perm[k], perm[p] = perm[p], perm[k]
            swaps.append(p)
            piv = a[k][k]
            rk = a[k]
            nz = [j for j in range(k + 1, n) if rk[j]]
            step = []
            for i in range(k + 1, n):
                f = a[i][k]
                if f:
                    f = f / piv
                    ri = a[i]
                    for j in nz:
                        ri[j] -= f * rk[j]
                    ri[k] = Fraction(0)
                    step.append((i, f))
            ops.append(step)
        self.n = n
        self.upper = a
        self.perm = perm
        self.swaps = swaps
        self.ops = ops

    def solve(self, b: Sequence) -> list[Fraction]:
        n = self.n
        x = [Fraction(v) for v in b]
        for k, step in enumerate(self.ops):
            p = self.swaps[k]
            if p != k:
                x[k], x[p] = x[p], x[k]
            xk = x[k]
            if xk:
                for i, f in step:
                    x[i] -= f * xk
        u = self.upper
        for k in range(n - 1, -1, -1):
            row = u[k]
            acc = x[k]
            for j in range(k + 1, n):
                if row[j]:
                    acc -= row[j] * x[j]
            x[k] = acc / row[k]
        return x


def solve(matrix: Sequence[Sequence], rhs: Sequence) -> list[Fraction]:
    return LUFactor(matrix).solve(rhs)


def charpoly(matrix: Sequence[Sequence]) -> Poly:
    """Characteristic polynomial ``det(x I - A)`` via reduction to Hessenberg form."""
    h = _fmatrix(matrix)
    n = len(h)
    for k in range(n - 2):
        p = next((i for i in range(k + 1, n) if h[i][k]), None)
        if p is None:
            continue
        if p != k + 1:
            h[k + 1], h[p] = h[p], h[k + 1]
            for row in h:
                row[k + 1], row[p] = row[p], row[k + 1]
        piv = h[k + 1][k]
        for i in range(k + 2, n):
            f = h[i][k]
            if not f:
                continue
            f = f / piv
            ri, rp = h[i], h[k + 1]
            for j in range(k, n):
                if rp[j]:
                    ri[j] -= f * rp[j]
            # similarity: add f * column i to column k+1
            for row in h:
                if row[i]:
                    row[k + 1] += f * row[i]
    # recurrence for the leading principal minors of x I - H
    polys = [Poly.const(1)]
    x = Poly.x()
    for m in range(1, n + 1):
        pm = (x - h[m - 1][m - 1]) * polys[m - 1]
        prod = Fraction(1)
        for i in range(1, m):
            prod *= h[m - i][m - i - 1]
            if not prod:
                break
            c = h[m - i - 1][m - 1]
            if c:
                pm = pm - polys[m - i - 1] * (prod * c)
        polys.append(pm)
    return polys[n]
