"""Monte Carlo sanity checks: determinism, chunk contract and agreement with exact values."""

from __future__ import annotations

from fractions import Fraction

import pytest

from chancekit import montecarlo as mc
from chancekit.markov import ValidationError, win_prob_exact, solve_duration_pgfs
from chancekit.ruin import GeneralDie

TOY_MEAN = 7.5
TOY_WIN = 11 / 20


def test_board_simulation_is_deterministic(toy_process):
    a = mc.simulate_board(toy_process, 5000, 3)
    b = mc.simulate_board(toy_process, 5000, 3)
    assert a == b
    assert mc.simulate_board(toy_process, 5000, 4).total != a.total


def test_chunks_are_independent_of_schedule(toy_process):
    trials = 2 * mc.CHUNK + 17
    rep = mc.simulate_board(toy_process, trials, 11)
    sampler = mc._BoardSampler(toy_process)
    parts = list(mc._chunks(trials))
    total = 0
    for c, n in reversed(parts):
        total += int(sampler.durations(mc._rng(11, c), n).sum())
    assert total == rep.total
    # a run of exactly one chunk reproduces the first chunk of a longer run
    first = mc.simulate_board(toy_process, mc.CHUNK, 11)
    assert first.total == int(sampler.durations(mc._rng(11, 0), mc.CHUNK).sum())


def test_board_mean_within_four_standard_errors(toy_process):
    rep = mc.simulate_board(toy_process, 100_000, 0)
    assert rep.within(TOY_MEAN)
    assert abs(rep.sample_std**2 - 89 / 4) < 1.0


def test_two_player_win_rate(toy_process):
    rep = mc.simulate_two_player(toy_process, 100_000, 1)
    w = float(win_prob_exact(solve_duration_pgfs(toy_process)[0]))
    assert w == TOY_WIN
    assert rep.within(w, two_player=True)


def test_seed_meta_agreement(toy_process):
    """Across 20 seeds at least 19 estimates lie within 4 standard errors."""
    hits = sum(mc.simulate_board(toy_process, 20_000, s).within(TOY_MEAN) for s in range(20))
    assert hits >= 19


def test_walk_simulation():
    die = GeneralDie(((1, Fraction(3, 4)), (-1, Fraction(1, 4))))
    rep = mc.simulate_walk(die, 3, 50_000, 5)
    assert rep.censored == 0
    assert rep.within(6.0)
    assert rep == mc.simulate_walk(die, 3, 50_000, 5)


def test_walk_censoring_for_zero_drift():
    rep = mc.simulate_walk(GeneralDie.fair(1, -1), 1, 2000, 2, round_cap=50)
    assert rep.censored > 0
    assert rep.trials + rep.censored == 2000


def test_within_exact_agreement():
    r = mc.SimReport(10, 2.0, 0.0, 0.0, 0)
    assert r.within(2.0) and not r.within(2.1)


@pytest.mark.parametrize("kwargs", [dict(trials=0, seed=0), dict(trials=10, seed=-1)])
def test_simulation_validation(toy_process, kwargs):
    with pytest.raises(ValidationError):
        mc.simulate_board(toy_process, **kwargs)


def test_walk_validation():
    with pytest.raises(ValidationError):
        mc.simulate_walk(GeneralDie.fair(1, -1), 0, 10, 0)
