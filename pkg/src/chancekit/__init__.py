"""Exact analysis of games of pure chance.

Board games become absorbing Markov chains with rational duration PGFs;
positive-step pile games get asymptotic moment polynomials; gambler's-ruin
walks with unlimited credit get algebraic PGFs, algebraic-number moments and
certified truncations.
"""

__version__ = "0.1.0"

from .markov import (  # noqa: E402
    BoardSpec,
    ComputationError,
    GameStats,
    InfiniteMomentError,
    MarkovProcess,
    ValidationError,
    build_board_process,
    hadamard_square,
    moments_by_linear_solve,
    process_win_bracket,
    solve_duration_pgfs,
    win_prob_approx,
    win_prob_exact,
)

__all__ = [
    "BoardSpec",
    "ComputationError",
    "GameStats",
    "InfiniteMomentError",
    "MarkovProcess",
    "ValidationError",
    "__version__",
    "build_board_process",
    "hadamard_square",
    "moments_by_linear_solve",
    "process_win_bracket",
    "solve_duration_pgfs",
    "win_prob_approx",
    "win_prob_exact",
]
