from .config import Algorithm, ConfigReport, SolverConfig, ThetaMode, parse_algorithm, validate_config
from .diagnostics import fixed_point_residual, lasso_kkt_residual, solve_reference
from .driver import IterationRecord, IterationTrace, SolverResult, run_solver
from .prox import fb_map, forward_step, grad_least_squares, soft_threshold, weighted_resolvent_l1
from .schedules import Schedule, ScheduleKind, ScheduleRole, parse_schedule
from .steps import IterState, ns_fbsa_step, step_apfbnsm, step_classical, step_lorenz_pock, step_new
from .terms import Contraction, Problem, ProxTerm, SmoothTerm

__all__ = [
    "Algorithm",
    "ConfigReport",
    "SolverConfig",
    "ThetaMode",
    "parse_algorithm",
    "validate_config",
    "fixed_point_residual",
    "lasso_kkt_residual",
    "solve_reference",
    "IterationRecord",
    "IterationTrace",
    "SolverResult",
    "run_solver",
    "fb_map",
    "forward_step",
    "grad_least_squares",
    "soft_threshold",
    "weighted_resolvent_l1",
    "Schedule",
    "ScheduleKind",
    "ScheduleRole",
    "parse_schedule",
    "IterState",
    "ns_fbsa_step",
    "step_apfbnsm",
    "step_classical",
    "step_lorenz_pock",
    "step_new",
    "Contraction",
    "Problem",
    "ProxTerm",
    "SmoothTerm",
]
