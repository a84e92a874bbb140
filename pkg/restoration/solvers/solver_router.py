# restoration/solvers/solver_router.py
from __future__ import annotations

from typing import Callable

import numpy as np

from .config import Algorithm, SolverConfig, parse_algorithm
from .steps import IterState, step_apfbnsm, step_classical, step_lorenz_pock, step_new
from .terms import Problem

StepFunction = Callable[[IterState, int, SolverConfig, Problem], np.ndarray]

STEP_FUNCTIONS: dict[Algorithm, StepFunction] = {
    # fbs and prox-grad coincide once B = grad h and A = dg
    Algorithm.FBS: step_classical,
    Algorithm.PROX_GRAD: step_classical,
    Algorithm.MOUDAFI_OLINY: step_classical,
    Algorithm.LORENZ_POCK: step_lorenz_pock,
    Algorithm.APFBNSM: step_apfbnsm,
    Algorithm.NEW: step_new,
}

# forward-backward evaluations per iteration, used for cost reporting
FB_EVALUATIONS: dict[Algorithm, int] = {
    Algorithm.FBS: 1,
    Algorithm.PROX_GRAD: 1,
    Algorithm.MOUDAFI_OLINY: 1,
    Algorithm.LORENZ_POCK: 1,
    Algorithm.APFBNSM: 2,
    Algorithm.NEW: 3,
}


def pick_step(algorithm: Algorithm | str) -> StepFunction:
    """Returns the step function for an algorithm tag (enum or CLI name)."""
    if not isinstance(algorithm, Algorithm):
        algorithm = parse_algorithm(algorithm)
    return STEP_FUNCTIONS[algorithm]
