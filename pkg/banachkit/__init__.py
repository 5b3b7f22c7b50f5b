"""
banachkit: finite-scale computation of the norms behind iterated spreading models.

Provides:
- Interpolation gauges on l_p and their closed-form oracles (`banachkit.gauge`)
- Schreier-Baernstein norms with exact and heuristic partition search (`banachkit.schreier`)
- Davis diagonal symmetric norms (`banachkit.davis`)
- A space-expression language, its evaluator and the iterated chain X_k (`banachkit.spaces`)
- Spreading-model estimates and profile decomposition (`banachkit.spreading`)
- Invariant suites with versioned JSON reports (`banachkit.harness`)
"""

from .core import FVec, FlatVec, flat, lp_norm, parse_vector
from .errors import (
    BanachkitError,
    EvaluationError,
    InvalidParameterError,
    SchedulePolicyError,
    SizeLimitError,
    SolverError,
    SpaceSemanticError,
    SpaceSyntaxError,
)
from .spaces import SpaceEvaluator, build_chain, norm_of, parse_space
from .harness import Report, run_suite

__all__ = [
    # Vectors
    'FVec',
    'FlatVec',
    'flat',
    'lp_norm',
    'parse_vector',

    # Spaces and evaluation
    'SpaceEvaluator',
    'build_chain',
    'norm_of',
    'parse_space',

    # Suites
    'Report',
    'run_suite',

    # Errors
    'BanachkitError',
    'EvaluationError',
    'InvalidParameterError',
    'SchedulePolicyError',
    'SizeLimitError',
    'SolverError',
    'SpaceSemanticError',
    'SpaceSyntaxError',
]
