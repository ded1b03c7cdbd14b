"""Monte Carlo sanity checks for boards and random walks.

Generator contract: trials are split into fixed chunks of ``CHUNK`` trials;
chunk ``c`` draws from ``Philox(SeedSequence([seed, c]))``.  Results therefore
depend only on ``(seed, trials, configuration)`` -- not on how chunks are
scheduled -- and are reduced with exact integer tallies.

Die faces are sampled exactly: a uniform integer in ``[0, Q)`` is compared
with integer cumulative weights on the common-denominator lattice ``Q``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import sqrt

import numpy as np

from .markov import MarkovProcess, ValidationError
from .ruin.die import GeneralDie

ALGORITHM = "numpy-Philox4x32-10/SeedSequence([seed,chunk])"
CHUNK = 1 << 16
MAX_LATTICE = 1 << 62


@dataclass(frozen=True)
class SimReport:
    trials: int
    mean: float
    sample_std: float
    std_error: float
    seed: int
    algorithm: str = ALGORITHM
    win_rate: float | None = None
    win_std_error: float | None = None
    censored: int = 0
    total: int = 0
    total_sq: int = 0

    def within(self, target: float, k: float = 4.0, two_player: bool = False) -> bool:
        """``|estimate - target| <= k`` standard errors (exact agreement when the error is 0)."""
        est, se = (self.win_rate, self.win_std_error) if two_player else (self.mean, self.std_error)
        return abs(est - target) <= k * se if se > 0 else abs(est - target) < 1e-12

    def as_dict(self) -> dict:
        return {k: v for k, v in self.__dict__.items()}


def _rng(seed: int, chunk: int) -> np.random.Generator:
    if seed < 0:
        raise ValidationError("seed must be nonnegative")
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, chunk])))


def _chunks(trials: int):
    if trials < 1:
        raise ValidationError("trials must be at least 1")
    c = 0
    done = 0
    while done < trials:
        n = min(CHUNK, trials - done)
        yield c, n
        done += n
        c += 1


def _summary(trials: int, total: int, total_sq: int, seed: int, **extra) -> SimReport:
    mean = Fraction(total, trials)
    if trials > 1:
        var = Fraction(total_sq * trials - total * total, trials * (trials - 1))
        sd = sqrt(float(var))
    else:
        sd = 0.0
    return SimReport(trials, float(mean), sd, sd / sqrt(trials), seed, total=total, total_sq=total_sq, **extra)


class _BoardSampler:
    """Transition table on a common integer lattice."""

    def __init__(self, m: MarkovProcess):
        Q = m.scale()
        if Q >= MAX_LATTICE:
            raise ValidationError("probability denominators too large for lattice sampling")
        width = max(len(r) for r in m.transitions)
        N = m.state_count
        # row 0 unused; absorbing row loops to itself
        self.cum = np.full((N + 1, width), Q, dtype=np.int64)
        self.tgt = np.full((N + 1, width), N, dtype=np.int64)
        for v, row in enumerate(m.transitions, start=1):
            acc = 0
            for j, (u, p) in enumerate(row):
                acc += int(p * Q)
                self.cum[v, j] = acc
                self.tgt[v, j] = u
        self.Q = Q
        self.N = N

    def durations(self, rng: np.random.Generator, n: int, start: int = 1) -> np.ndarray:
        st = np.full(n, start, dtype=np.int64)
        steps = np.zeros(n, dtype=np.int64)
        active = np.nonzero(st != self.N)[0]
        while len(active):
            r = rng.integers(0, self.Q, size=len(active), dtype=np.int64)
            rows = self.cum[st[active]]
            idx = (r[:, None] >= rows).sum(axis=1)
            st[active] = self.tgt[st[active], idx]
            steps[active] += 1
            active = active[st[active] != self.N]
        return steps


def simulate_board(m: MarkovProcess, trials: int, seed: int) -> SimReport:
    """Durations of independent games from state 1."""
    sampler = _BoardSampler(m)
    total = total_sq = 0
    for c, n in _chunks(trials):
        d = sampler.durations(_rng(seed, c), n)
        total += int(d.sum())
        total_sq += int((d * d).sum())
    return _summary(trials, total, total_sq, seed)


def simulate_two_player(m: MarkovProcess, trials: int, seed: int) -> SimReport:
    """Races between two independent tokens; the first mover wins ties (``T1 <= T2``)."""
    sampler = _BoardSampler(m)
    total = total_sq = wins = 0
    for c, n in _chunks(trials):
        rng = _rng(seed, c)
        d1 = sampler.durations(rng, n)
        d2 = sampler.durations(rng, n)
        wins += int((d1 <= d2).sum())
        total += int(d1.sum())
        total_sq += int((d1 * d1).sum())
    w = wins / trials
    rep = _summary(trials, total, total_sq, seed)
    return SimReport(rep.trials, rep.mean, rep.sample_std, rep.std_error, seed, win_rate=w,
                     win_std_error=sqrt(w * (1 - w) / trials), total=total, total_sq=total_sq)


def simulate_walk(die: GeneralDie, m: int, trials: int, seed: int, round_cap: int = 10_000) -> SimReport:
    """Rounds until the capital first reaches ``>= m``, among trials finishing within ``round_cap``.

    Capped trials are excluded from the statistics and counted in ``censored``.
    """
    if m < 1:
        raise ValidationError("goal must be at least 1")
    if round_cap < 1:
        raise ValidationError("round_cap must be at least 1")
    Q, w = die.scaled()
    if Q >= MAX_LATTICE:
        raise ValidationError("probability denominators too large for lattice sampling")
    cum = np.cumsum([c for _, c in w]).astype(np.int64)
    steps_tab = np.array([s for s, _ in w], dtype=np.int64)
    total = total_sq = finished = censored = 0
    for c, n in _chunks(trials):
        rng = _rng(seed, c)
        pos = np.zeros(n, dtype=np.int64)
        rounds = np.zeros(n, dtype=np.int64)
        active = np.arange(n)
        for _ in range(round_cap):
            if not len(active):
                break
            r = rng.integers(0, Q, size=len(active), dtype=np.int64)
            pos[active] += steps_tab[np.searchsorted(cum, r, side="right")]
            rounds[active] += 1
            active = active[pos[active] < m]
        censored += len(active)
        done = np.ones(n, dtype=bool)
        done[active] = False
        d = rounds[done]
        finished += len(d)
        total += int(d.sum())
        total_sq += int((d * d).sum())
    if finished == 0:
        return SimReport(trials, float("nan"), float("nan"), float("nan"), seed, censored=censored)
    rep = _summary(finished, total, total_sq, seed)
    return SimReport(rep.trials, rep.mean, rep.sample_std, rep.std_error, seed, censored=censored,
                     total=total, total_sq=total_sq)
