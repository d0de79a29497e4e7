"""Arc-search interior-point solver for constrained nonlinear programs.

Solves  min f(x)  s.t. h(x) = 0, g(x) >= 0  by following an ellipse that
approximates the central path, in three variants that differ in how the
second-order arc term is built and how multipliers are restarted after a
step.

>>> from arcopt import get_problem, solve, SolverConfig
>>> entry = get_problem("HS19")
>>> report = solve(entry.problem, entry.interior_start, SolverConfig(variant=3))
>>> report.converged
True
"""

from .arc import ArcState, complementarity_along_arc, eval_arc
from .errors import (ArcoptError, ContractViolationError, EvaluationError,
                     FactorizationError, InitializationError, StepStallError,
                     UnknownProblemError)
from .kkt import (KktResidual, NeighborhoodRef, dual_measure, jacobian, merit,
                  neighborhood_margin, residual)
from .linsys import Counters, RegPolicy, factorize, least_squares_y
from .model import (DerivativeReport, Fn, Iterate, NlpProblem, build_problem,
                    check_derivatives, linear_fn, make_iterate)
from .problems import (BenchmarkEntry, available_names, get_problem,
                       reference_entry, reference_table)
from .solver import (IterationRecord, SolveReport, SolverConfig, init_check,
                     select_sigma, solve, warm_restart)
from .stepsize import StepBreakdown, alpha_positivity, select_step

__version__ = "1.0.0"

__all__ = [
    "ArcState",
    "ArcoptError",
    "BenchmarkEntry",
    "ContractViolationError",
    "Counters",
    "DerivativeReport",
    "EvaluationError",
    "FactorizationError",
    "Fn",
    "InitializationError",
    "IterationRecord",
    "Iterate",
    "KktResidual",
    "NeighborhoodRef",
    "NlpProblem",
    "RegPolicy",
    "SolveReport",
    "SolverConfig",
    "StepBreakdown",
    "StepStallError",
    "UnknownProblemError",
    "alpha_positivity",
    "available_names",
    "build_problem",
    "check_derivatives",
    "complementarity_along_arc",
    "dual_measure",
    "eval_arc",
    "factorize",
    "get_problem",
    "init_check",
    "jacobian",
    "least_squares_y",
    "linear_fn",
    "make_iterate",
    "merit",
    "neighborhood_margin",
    "reference_entry",
    "reference_table",
    "residual",
    "select_sigma",
    "select_step",
    "solve",
    "warm_restart",
]
