"""Continuous DR-submodular maximization toolkit.

Objectives with exact derivatives, box and down-closed polytope constraints,
Frank-Wolfe and double-greedy solvers, mean-field bounds for log-submodular
models, and brute-force oracles for checking guarantees at small scale.
"""

from . import constraints, meanfield, objectives, solvers, verify
from ._accel import USE_NUMBA
from .constraints import Box, Polytope, simplex_max
from .errors import DrsubError
from .objectives import build_objective, orthant_reflect
from .solvers import SOLVERS, SolverConfig, SolveReport

__version__ = "0.1.0"

__all__ = [
    "Box",
    "DrsubError",
    "Polytope",
    "SOLVERS",
    "SolveReport",
    "SolverConfig",
    "USE_NUMBA",
    "build_objective",
    "constraints",
    "meanfield",
    "objectives",
    "orthant_reflect",
    "simplex_max",
    "solvers",
    "verify",
]
