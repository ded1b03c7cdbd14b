"""Absorbing Markov processes for board games: duration PGFs, moments, races.

States are numbered ``1..N``; state ``N`` is the single absorbing state.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from math import comb, lcm
from typing import Iterator, Sequence

from .exact.linalg import LUFactor, charpoly
from .exact.poly import Poly, series_mul
from .exact.ratfunc import PoleError, RationalFunction, rf_eval
from .exact.rational import to_decimal
from .fit import fit_cfinite


class ValidationError(ValueError):
    """Input violates a structural requirement (bad board, bad probabilities, ...)."""


class InfiniteMomentError(ArithmeticError):
    """The requested moment diverges (pole of the PGF at t = 1)."""


class ComputationError(RuntimeError):
    """An internal consistency check failed."""


# ---------------------------------------------------------------------------
# processes and boards
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MarkovProcess:
    """``transitions[v-1]`` lists ``(target, prob)`` pairs for transient state ``v``."""

    transitions: tuple[tuple[tuple[int, Fraction], ...], ...]

    @property
    def state_count(self) -> int:
        return len(self.transitions) + 1

    @property
    def absorbing(self) -> int:
        return self.state_count

    def validate(self) -> "MarkovProcess":
        N = self.state_count
        for v, row in enumerate(self.transitions, start=1):
            if not row:
                raise ValidationError(f"state {v} has no outgoing transitions")
            if sum(p for _, p in row) != 1:
                raise ValidationError(f"probabilities out of state {v} do not sum to 1")
            for u, p in row:
                if not 1 <= u <= N:
                    raise ValidationError(f"state {v} points to nonexistent state {u}")
                if p <= 0:
                    raise ValidationError(f"nonpositive probability on edge {v}->{u}")
        # every state must reach the absorbing state
        preds: dict[int, list[int]] = {u: [] for u in range(1, N + 1)}
        for v, row in enumerate(self.transitions, start=1):
            for u, _ in row:
                preds[u].append(v)
        seen = {N}
        stack = [N]
        while stack:
            u = stack.pop()
            for v in preds[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        if len(seen) != N:
            bad = min(set(range(1, N + 1)) - seen)
            raise ValidationError(f"game may never end: state {bad} cannot reach the absorbing state")
        return self

    @classmethod
    def from_lists(cls, rows: Sequence[Sequence[tuple[int, object]]]) -> "MarkovProcess":
        merged = []
        for row in rows:
            acc: dict[int, Fraction] = {}
            for u, p in row:
                acc[u] = acc.get(u, Fraction(0)) + Fraction(p)
            merged.append(tuple(sorted(acc.items())))
        return cls(tuple(merged)).validate()

    def scale(self) -> int:
        """Common denominator of all transition probabilities."""
        q = 1
        for row in self.transitions:
            for _, p in row:
                q = lcm(q, p.denominator)
        return q


@dataclass(frozen=True)
class BoardSpec:
    size: int
    die: tuple[tuple[int, Fraction], ...]
    ladders: tuple[tuple[int, int], ...] = ()
    snakes: tuple[tuple[int, int], ...] = ()
    #: jumps dropped while resolving duplicate sources (kept for reporting)
    dropped: tuple[tuple[int, int], ...] = field(default=(), compare=False)

    def validate(self) -> "BoardSpec":
        n = self.size
        if n < 2:
            raise ValidationError("board needs at least 2 squares")
        if not self.die:
            raise ValidationError("die has no faces")
        for step, p in self.die:
            if step < 1:
                raise ValidationError(f"die step {step} must be positive")
            if p <= 0:
                raise ValidationError(f"die probability for step {step} must be positive")
        if sum(p for _, p in self.die) != 1:
            raise ValidationError("die probabilities do not sum to 1")
        if len({s for s, _ in self.die}) != len(self.die):
            raise ValidationError("repeated die step")
        for a, b in self.ladders:
            if not a < b:
                raise ValidationError(f"ladder {[a, b]} must go up")
        for a, b in self.snakes:
            if not a > b:
                raise ValidationError(f"snake {[a, b]} must go down")
        jumps = self.ladders + self.snakes
        for a, b in jumps:
            if not (1 <= a <= n and 1 <= b <= n):
                raise ValidationError(f"jump {[a, b]} leaves the board 1..{n}")
        sources = [a for a, _ in jumps]
        dup = sorted({a for a in sources if sources.count(a) > 1})
        if dup:
            raise ValidationError(f"square {dup[0]} is the source of two jumps")
        targets = {b for _, b in jumps}
        chained = sorted(set(sources) & targets)
        if chained:
            raise ValidationError(f"square {chained[0]} is both a jump source and a jump target")
        if n in sources:
            raise ValidationError("the final square cannot start a jump")
        return self

    @classmethod
    def create(cls, size, die, ladders=(), snakes=(), duplicates: str = "error") -> "BoardSpec":
        """Build and validate; ``duplicates`` is ``"error"``, ``"first"`` or ``"last"``.

        With ``"first"``/``"last"`` a square listed as the source of several
        jumps keeps only the first/last one in listing order (ladders before snakes).
        """
        die = tuple((int(s), Fraction(p)) for s, p in die)
        ladders = tuple((int(a), int(b)) for a, b in ladders)
        snakes = tuple((int(a), int(b)) for a, b in snakes)
        dropped: list[tuple[int, int]] = []
        if duplicates not in ("error", "first", "last"):
            raise ValueError(f"unknown duplicate policy {duplicates!r}")
        if duplicates != "error":
            tagged = [("L", j) for j in ladders] + [("S", j) for j in snakes]
            keep: dict[int, tuple[str, tuple[int, int]]] = {}
            for kind, j in tagged:
                if j[0] in keep:
                    if duplicates == "first":
                        dropped.append(j)
                        continue
                    dropped.append(keep[j[0]][1])
                keep[j[0]] = (kind, j)
            ladders = tuple(j for k, j in keep.values() if k == "L")
            snakes = tuple(j for k, j in keep.values() if k == "S")
        return cls(size, die, ladders, snakes, tuple(dropped)).validate()


def build_board_process(spec: BoardSpec) -> MarkovProcess:
    """Square ``i`` moves to ``min(i + step, n)`` and then takes at most one jump."""
    spec.validate()
    n = spec.size
    jump = dict(spec.ladders)
    jump.update(dict(spec.snakes))
    rows = []
    for i in range(1, n):
        row = []
        for step, p in spec.die:
            j = min(i + step, n)
            row.append((jump.get(j, j), p))
        rows.append(row)
    return MarkovProcess.from_lists(rows)


# ---------------------------------------------------------------------------
# duration distributions
# ---------------------------------------------------------------------------


def duration_series(m: MarkovProcess, K: int) -> list[list[Fraction]]:
    """``out[v-1][k] = Prob(game from v lasts exactly k rounds)`` for ``k <= K``.

    Runs an integer dynamic program on ``Q**k * prob`` where ``Q`` is the
    common denominator of the transition probabilities.
    """
    Q = m.scale()
    N = m.state_count
    rows = [[(u, int(p * Q)) for u, p in row] for row in m.transitions]
    cur = [0] * (N + 1)
    cur[N] = 1  # round 0: only the absorbing state is finished
    out = [[Fraction(0)] * (K + 1) for _ in range(N - 1)]
    for k in range(1, K + 1):
        nxt = [0] * (N + 1)
        for v, row in enumerate(rows, start=1):
            acc = 0
            for u, w in row:
                c = cur[u]
                if c:
                    acc += w * c
            nxt[v] = acc
        cur = nxt
        den = Q**k
        for v in range(1, N):
            if cur[v]:
                out[v - 1][k] = Fraction(cur[v], den)
    return out


def iter_duration_probs(m: MarkovProcess, state: int = 1) -> Iterator[Fraction]:
    """Endless stream of ``Prob(duration = k)`` for ``k = 0, 1, ...`` from ``state``."""
    Q = m.scale()
    N = m.state_count
    rows = [[(u, int(p * Q)) for u, p in row] for row in m.transitions]
    # backward recursion on hitting-time vectors, as in duration_series
    cur = [0] * (N + 1)
    cur[N] = 1
    yield Fraction(int(state == N))
    k = 0
    while True:
        k += 1
        nxt = [0] * (N + 1)
        for v, row in enumerate(rows, start=1):
            acc = 0
            for u, w in row:
                c = cur[u]
                if c:
                    acc += w * c
            nxt[v] = acc
        cur = nxt
        yield Fraction(cur[state], Q**k)


def transition_matrix(m: MarkovProcess) -> list[list[Fraction]]:
    """Transient-to-transient block of the transition matrix."""
    n = m.state_count - 1
    mat = [[Fraction(0)] * n for _ in range(n)]
    for v, row in enumerate(m.transitions):
        for u, p in row:
            if u <= n:
                mat[v][u - 1] += p
    return mat


def common_denominator_poly(m: MarkovProcess) -> Poly:
    """``det(I - t Q)`` with ``Q`` the transient block: a denominator shared by every ``f_v``."""
    mat = transition_matrix(m)
    n = len(mat)
    return charpoly(mat).reverse(n)


def solve_duration_pgfs(m: MarkovProcess) -> list[RationalFunction]:
    """Duration PGFs ``f_v(t)`` for ``v = 1..N-1`` in lowest terms.

    All of them are ``num_v / D`` for ``D = det(I - tQ)`` before reduction;
    numerators have degree ``<= N-1`` by Cramer's rule, so ``N`` series terms
    determine them.  Each reduced denominator is checked to divide ``D`` and
    each PGF to satisfy ``f_v(1) = 1``.
    """
    D = common_denominator_poly(m)
    n = m.state_count - 1
    series = duration_series(m, n)
    Dc = list(D.coeffs)
    out = []
    for v, s in enumerate(series, start=1):
        num = Poly(series_mul(s, Dc, n + 1))
        f = RationalFunction(num, D)
        if not f.den.divides(D):
            raise ComputationError(f"denominator of f_{v} does not divide det(I - tQ)")
        if rf_eval(f, 1) != 1:
            raise ComputationError(f"f_{v}(1) != 1")
        out.append(f)
    return out


# ---------------------------------------------------------------------------
# moments
# ---------------------------------------------------------------------------


def stirling2_row(k: int) -> list[int]:
    """``[S(k, 0), ..., S(k, k)]`` (Stirling numbers of the second kind)."""
    row = [1]
    for n in range(1, k + 1):
        new = [0] * (n + 1)
        for j in range(1, n + 1):
            new[j] = j * (row[j] if j < len(row) else 0) + row[j - 1]
        row = new
    return row


def raw_from_factorial(factorial: Sequence[Fraction], k: int) -> Fraction:
    """``E[X**k]`` from factorial moments ``E[X(X-1)...(X-j+1)]``, ``j = 0..k``."""
    s = stirling2_row(k)
    return sum((s[j] * factorial[j] for j in range(k + 1)), Fraction(0))


def pgf_moment(f: RationalFunction, k: int) -> Fraction:
    """``(t d/dt)**k f`` at ``t = 1``."""
    if k < 0:
        raise ValueError("moment order must be nonnegative")
    try:
        tay = f.taylor_at(1, k)
    except PoleError:
        raise InfiniteMomentError("infinite moment: pole at t = 1") from None
    fact = [Fraction(1)]
    for j in range(1, k + 1):
        fact.append(fact[-1] * j)
    factorial = [tay[j] * fact[j] for j in range(k + 1)]
    return raw_from_factorial(factorial, k)


def central_from_raw(raw: Sequence[Fraction]) -> list[Fraction]:
    """Central moments ``E[(X - mu)**j]`` for ``j = 0..len(raw)-1`` given raw moments (raw[0] = 1)."""
    mu = raw[1] if len(raw) > 1 else Fraction(0)
    out = []
    for j in range(len(raw)):
        out.append(sum((comb(j, i) * raw[i] * (-mu) ** (j - i) for i in range(j + 1)), Fraction(0)))
    return out


def _sqrt_decimal(x: Fraction, digits: int = 40) -> Decimal:
    with localcontext() as ctx:
        ctx.prec = digits
        return to_decimal(x, digits + 5).sqrt()


@dataclass(frozen=True)
class GameStats:
    raw_moments: tuple[Fraction, ...]  # E[X**0..X**k]
    central_moments: tuple[Fraction, ...]  # E[(X-mu)**0..k]

    @property
    def expectation(self) -> Fraction:
        return self.raw_moments[1]

    @property
    def variance(self) -> Fraction | None:
        return self.central_moments[2] if len(self.central_moments) > 2 else None

    def standard_deviation(self, digits: int = 40) -> Decimal | None:
        v = self.variance
        return None if v is None else _sqrt_decimal(v, digits)

    def skewness(self, digits: int = 40) -> Decimal | None:
        if len(self.central_moments) < 4 or not self.variance:
            return None
        with localcontext() as ctx:
            ctx.prec = digits
            sd = self.standard_deviation(digits + 5)
            return to_decimal(self.central_moments[3], digits + 5) / sd**3

    def kurtosis(self, digits: int = 40) -> Decimal | None:
        if len(self.central_moments) < 5 or not self.variance:
            return None
        return to_decimal(self.central_moments[4] / self.variance**2, digits)

    @classmethod
    def from_raw(cls, raw: Sequence[Fraction]) -> "GameStats":
        raw = tuple(Fraction(r) for r in raw)
        return cls(raw, tuple(central_from_raw(raw)))


def moments_by_linear_solve(m: MarkovProcess, k: int) -> list[GameStats]:
    """Raw and central moments up to order ``k`` for every transient start state.

    Writing ``mu_v^(j) = E[X_v**j]``, the relation ``X_v = 1 + X_U`` gives
    ``(I - Q) mu^(j) = sum_u p_vu sum_{i<j} C(j,i) mu_u^(i)``, one rational
    system per order with the same matrix, factored once.
    """
    if k < 1:
        raise ValueError("moment order must be at least 1")
    n = m.state_count - 1
    Q = transition_matrix(m)
    A = [[(Fraction(int(i == j)) - Q[i][j]) for j in range(n)] for i in range(n)]
    lu = LUFactor(A)
    N = m.state_count
    # mus[j][u] for u = 1..N (index u), absorbing: 1 for j = 0 else 0
    mus: list[list[Fraction]] = [[Fraction(1)] * (N + 1)]
    for j in range(1, k + 1):
        rhs = []
        for row in m.transitions:
            acc = Fraction(0)
            for u, p in row:
                inner = Fraction(0)
                for i in range(j):
                    val = mus[i][u]
                    if val:
                        inner += comb(j, i) * val
                acc += p * inner
            rhs.append(acc)
        sol = lu.solve(rhs)
        mus.append([Fraction(0)] + sol + [Fraction(0)])
    return [GameStats.from_raw([mus[j][v] for j in range(k + 1)]) for v in range(1, N)]


# ---------------------------------------------------------------------------
# two-player races
# ---------------------------------------------------------------------------


def hadamard_square(f: RationalFunction, extra: int = 20) -> RationalFunction:
    """Rational generating function of the squared coefficients of ``f``."""
    L = f.den.degree
    M = L * (L + 1) // 2
    tail = max(f.num.degree - L + 1, 0)
    count = 3 * M + 10 + 2 * tail + extra
    a = f.series(count - 1)
    sq = [c * c for c in a]
    rec = fit_cfinite(sq, M, holdout=extra)
    if rec is None:
        raise ComputationError(
            f"no C-finite fit for the Hadamard square (order bound {M}, {count} terms)"
        )
    return rec.to_rational_function()


def win_prob_exact(f: RationalFunction) -> Fraction:
    """Probability that the first mover wins a race of two identical players (ties go to the mover)."""
    if rf_eval(f, 1) != 1:
        raise ValidationError("f(1) must equal 1")
    g = hadamard_square(f)
    try:
        return (1 + rf_eval(g, 1)) / 2
    except PoleError:
        raise ComputationError("Hadamard square has a pole at t = 1") from None


def _series_stream(f) -> Iterator[Fraction]:
    if isinstance(f, RationalFunction):
        num, den = f.num.coeffs, f.den.coeffs
        d0 = den[0]
        if not d0:
            raise PoleError("pole at origin")
        hist: list[Fraction] = []
        k = 0
        while True:
            acc = num[k] if k < len(num) else Fraction(0)
            for i in range(1, min(k, len(den) - 1) + 1):
                if den[i]:
                    acc -= den[i] * hist[k - i]
            c = acc / d0
            hist.append(c)
            yield c
            k += 1
    else:
        yield from f


@dataclass(frozen=True)
class WinBracket:
    lower: Fraction
    upper: Fraction
    K: int

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    def __iter__(self):
        return iter((self.lower, self.upper))


def win_prob_approx(f1, f2, eps, max_terms: int = 10**6) -> WinBracket:
    """Certified bracket for ``Pr[D1 <= D2]`` (first mover wins ties).

    ``f1``/``f2`` are RationalFunctions or iterables of duration probabilities.
    ``K`` is the first index with both tails ``1 - F(K) <= eps``.  The lower
    bound uses only rounds ``<= K`` of player one; the upper bound adds player
    one's whole tail.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise ValidationError("eps must be positive")
    s1, s2 = _series_stream(f1), _series_stream(f2)
    A = Fraction(0)  # F1(k)
    B = Fraction(0)  # F2(k)
    lower = Fraction(0)
    for k in range(max_terms + 1):
        a, b = next(s1), next(s2)
        lower += a * (1 - B)  # B is F2(k-1) here
        A += a
        B += b
        if 1 - A <= eps and 1 - B <= eps:
            return WinBracket(lower, lower + (1 - A), k)
    raise ComputationError(f"tails did not drop below {eps} within {max_terms} rounds")


def process_win_bracket(m: MarkovProcess, eps, state1: int = 1, state2: int = 1) -> WinBracket:
    """``win_prob_approx`` driven directly by the integer dynamic program of ``m``."""
    return win_prob_approx(iter_duration_probs(m, state1), iter_duration_probs(m, state2), eps)
