"""Proximal gradient solvers for multiobjective composite optimization.

Each objective splits into a smooth part with gradient access and one shared
nonsmooth part handled through its proximity operator. The solvers pick a
common direction by solving a small dual problem over the simplex, then step
with Armijo backtracking or fixed unit steps. Spectral (Barzilai-Borwein)
stepsizes give the accelerated variants.

Typical use::

    from moprox import SolverConfig, get_problem, solve

    problem = get_problem("JOS1a")
    report = solve(problem, x0, SolverConfig(algorithm="bbpgmo"))
    print(report.status, report.iterations)

The ``bench`` console script (``moprox.bench``) runs seeded benchmark
campaigns and exports CSV/SVG artifacts; ``bench verify`` runs an invariant
battery over random instances.
"""

from .bb import BBConfig, BBMemory, bb_stepsizes
from .bench import ExperimentSpec, ExperimentSummary, export_results, run_campaign
from .direction import (
    DirectionResult,
    FWConfig,
    SubproblemInput,
    direction_model_value,
    dual_gradient,
    dual_objective,
    frank_wolfe_solve,
    recover_direction,
)
from .exceptions import (
    DegenerateStepError,
    DualSolveError,
    EvaluationError,
    LineSearchError,
    UnknownProblemError,
)
from .linesearch import LineSearchConfig, armijo_search, max_feasible_step
from .merit import merit_gap, weak_pareto_gap_grid
from .problems import (
    EvalCounters,
    MCOProblem,
    SmoothComponent,
    check_jacobian,
)
from .prox import (
    BoxIndicator,
    SimplexIndicator,
    WeightedL1,
    Zero,
    combined_prox,
    project_box,
    project_simplex,
    soft_threshold,
)
from .solvers import (
    IterateState,
    SolverConfig,
    SolveReport,
    TraceRecord,
    pareto_sweep,
    solve,
)
from .testproblems import (
    QuadraticSpec,
    available_problems,
    bk1,
    get_problem,
    jos1,
    load_returns_table,
    markowitz_portfolio,
    random_quadratic,
    register_problem,
)

__version__ = "0.1.0"

__all__ = [
    "BBConfig",
    "BBMemory",
    "BoxIndicator",
    "DegenerateStepError",
    "DirectionResult",
    "DualSolveError",
    "EvalCounters",
    "EvaluationError",
    "ExperimentSpec",
    "ExperimentSummary",
    "FWConfig",
    "IterateState",
    "LineSearchConfig",
    "LineSearchError",
    "MCOProblem",
    "QuadraticSpec",
    "SimplexIndicator",
    "SmoothComponent",
    "SolveReport",
    "SolverConfig",
    "SubproblemInput",
    "TraceRecord",
    "UnknownProblemError",
    "WeightedL1",
    "Zero",
    "armijo_search",
    "available_problems",
    "bb_stepsizes",
    "bk1",
    "check_jacobian",
    "combined_prox",
    "direction_model_value",
    "dual_gradient",
    "dual_objective",
    "export_results",
    "frank_wolfe_solve",
    "get_problem",
    "jos1",
    "load_returns_table",
    "markowitz_portfolio",
    "max_feasible_step",
    "merit_gap",
    "pareto_sweep",
    "project_box",
    "project_simplex",
    "random_quadratic",
    "recover_direction",
    "register_problem",
    "run_campaign",
    "soft_threshold",
    "solve",
    "weak_pareto_gap_grid",
]
