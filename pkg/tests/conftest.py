"""Shared strategies, fixtures and independent oracles."""

from __future__ import annotations

import os
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from chancekit.io import load_board
from chancekit.markov import BoardSpec, ValidationError, build_board_process

settings.register_profile(
    "default",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("thorough", deadline=None, max_examples=400, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

BIG = 2**64


def rationals(max_num: int = BIG, max_den: int = BIG, nonzero: bool = False):
    s = st.fractions(min_value=-max_num, max_value=max_num, max_denominator=max_den)
    return s.filter(bool) if nonzero else s


def small_rationals(bound: int = 50, nonzero: bool = False):
    s = st.builds(Fraction, st.integers(-bound, bound), st.integers(1, bound))
    return s.filter(bool) if nonzero else s


@st.composite
def probability_vectors(draw, size: int, max_den: int = 12):
    """``size`` positive rationals summing to 1."""
    weights = draw(st.lists(st.integers(1, max_den), min_size=size, max_size=size))
    total = sum(weights)
    return [Fraction(w, total) for w in weights]


@pytest.fixture(scope="session")
def toy_process():
    return build_board_process(load_board("toy.json"))


@pytest.fixture(scope="session")
def winning_moves_process():
    return build_board_process(load_board("winning_moves.json"))


@pytest.fixture(scope="session")
def cardinal_process():
    return build_board_process(load_board("cardinal.json", "last"))


SMALL_DICE = (
    ((1, Fraction(1)),),
    ((1, Fraction(1, 2)), (2, Fraction(1, 2))),
    ((1, Fraction(1, 3)), (2, Fraction(1, 3)), (3, Fraction(1, 3))),
    ((1, Fraction(1, 4)), (3, Fraction(3, 4))),
)


def small_board_corpus(max_size: int = 12):
    """Every board with ``size <= max_size``, one of ``SMALL_DICE`` and at most one
    ladder or snake, whose game ends with probability one."""
    for n in range(2, max_size + 1):
        jumps = [None] + [(a, b) for a in range(1, n) for b in range(1, n + 1) if a != b]
        for die in SMALL_DICE:
            for j in jumps:
                ladders = [j] if j and j[1] > j[0] else []
                snakes = [j] if j and j[1] < j[0] else []
                try:
                    spec = BoardSpec.create(n, die, ladders, snakes)
                    yield spec, build_board_process(spec)
                except ValidationError:
                    continue


def board_dp_oracle(spec: BoardSpec, K: int) -> list[Fraction]:
    """``Prob(duration = k)`` from square 1 by pushing the position distribution forward."""
    jump = dict(spec.ladders) | dict(spec.snakes)
    n = spec.size
    dist = {1: Fraction(1)}
    out = [Fraction(0)]
    for _ in range(K):
        nxt: dict[int, Fraction] = {}
        for pos, pr in dist.items():
            for step, p in spec.die:
                q = min(pos + step, n)
                q = jump.get(q, q)
                nxt[q] = nxt.get(q, 0) + pr * p
        out.append(nxt.pop(n, Fraction(0)))
        dist = nxt
    return out


# ---------------------------------------------------------------------------
# acceptance summary: one PASS/FAIL line per criterion, printed at the end of the run
# ---------------------------------------------------------------------------

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
