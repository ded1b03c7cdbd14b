"""Gambler's ruin with unlimited credit: first-passage PGFs, their equations and moments."""

from .algebraic import (
    AlgebraicPGF,
    BranchExpansion,
    DegreeBoundsExhausted,
    MinPolyResult,
    branch_expansion,
    catalan_moments,
    catalan_pgf,
    escape_probability,
    exact_moments,
    expectation_resultant_poly,
    fuss_dyck_equation,
    fuss_moments,
    fuss_pgf,
    mixed_case_pgf,
    moment_min_poly,
    moment_stats,
    pgf_algebraic_equation,
    rational_moments,
)
from .closed import (
    count_dyck_words,
    count_first_passage_words,
    first_passage_prob_oracle,
    fuss_catalan_binomial,
    fuss_catalan_coeff,
    fuss_first_passage_prob,
)
from .die import NEGATIVE, POSITIVE, ZERO, GeneralDie
from .numberfield import NumberField
from .reach import ReachResult, reach_m_expectation
from .twoplayer import DEFAULT_P, FixtureChecksumError, FixtureReport, f_value, load_fixtures, verify_twoplayer_recurrence, win_probability
from .wab import WabSystem, eliminate_wab_system, setup_wab_system, solve_wab_series, wab_series

__all__ = [name for name in dir() if not name.startswith("_")]
