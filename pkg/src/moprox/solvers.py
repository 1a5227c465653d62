"""Proximal gradient solvers for multiobjective composite problems.

All modes share one skeleton (solve the direction subproblem at per-objective
inverse stepsizes alpha, stop when ||d|| is small, otherwise step) and differ
only in how alpha and the steplength t are chosen:

==============  =============================  =======================
mode            alpha_i                        t
==============  =============================  =======================
pgmo_ls         constant ell (default 1)       Armijo backtracking
pgmo_fixed      constant ell (> L_max / 2)     1
pgmo_mu         mu_i (strong convexity)        Armijo backtracking
pgmo_separate   L_i (gradient Lipschitz)       1
bbpgmo          Barzilai-Borwein secant        Armijo backtracking
abbpgmo         BB, inflated by tau until the  1
                quadratic upper bound holds
==============  =============================  =======================

Fixed steps are capped at the largest box-feasible t; "pgmo_L" is accepted as
an alias of pgmo_separate. The first BB pair uses the synthetic previous
iterate x0 - offset * ones.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace

import numpy as np

from .bb import BBConfig, BBMemory, bb_stepsizes
from .direction import DirectionResult, FWConfig, SubproblemInput, frank_wolfe_solve
from .exceptions import DualSolveError, LineSearchError
from .linesearch import LineSearchConfig, armijo_search, max_feasible_step
from .problems import EvalCounters
from .prox import BoxIndicator, SimplexIndicator, project_box, project_simplex

_MODES = ("pgmo_ls", "pgmo_fixed", "pgmo_mu", "pgmo_separate", "bbpgmo", "abbpgmo")
_ALIASES = {"pgmo_L": "pgmo_separate"}
_LINE_SEARCH_MODES = ("pgmo_ls", "pgmo_mu", "bbpgmo")
# slack for accepting a soft-failed dual solve: the per-objective descent
# certificate model_i <= -alpha_i ||d||^2 must hold within this tolerance
_DESCENT_SLACK = 1e-8
# relative slack for the abbpgmo sufficient decrease test, so fp noise cannot
# trigger inflation once alpha_i already dominates the true curvature
_ABB_CHECK_SLACK = 1e-12


@dataclass(frozen=True)
class SolverConfig:
    algorithm: str = "bbpgmo"
    ell: float | None = None        # pgmo_ls / pgmo_fixed stepsize parameter
    tau: float = 2.0                # abbpgmo inflation factor
    bb: BBConfig = field(default_factory=BBConfig)
    ls: LineSearchConfig = field(default_factory=LineSearchConfig)
    fw: FWConfig = field(default_factory=FWConfig)
    d_tol: float = 1e-6
    max_iters: int = 500
    x_minus_offset: float = 1e-4

    def __post_init__(self):
        _canonical_mode(self.algorithm)
        if self.d_tol <= 0 or self.max_iters < 1:
            raise ValueError("d_tol must be positive and max_iters >= 1")
        if self.tau <= 1.0:
            raise ValueError("tau must exceed 1")


@dataclass
class IterateState:
    """Mutable loop state: current point, objective values, Jacobian."""

    x: np.ndarray
    F: np.ndarray
    f: np.ndarray          # smooth parts only (abbpgmo decrease checks)
    grads: np.ndarray


@dataclass
class TraceRecord:
    k: int
    d_norm: float
    t: float
    alphas: np.ndarray
    lam: np.ndarray
    x: np.ndarray               # iterate after the step
    F: np.ndarray               # objective vector after the step
    fw_gap: float
    model_decrease: np.ndarray
    backtracks: int
    inflations: np.ndarray | None
    time_s: float


@dataclass
class SolveReport:
    status: str       # critical_point | max_iters | line_search_failure | dual_failure
    x: np.ndarray
    F: np.ndarray
    iterations: int
    counters: EvalCounters
    trace: list
    total_time: float
    warnings: list
    final_direction: DirectionResult | None
    x0_projected: bool

    @property
    def converged(self):
        return self.status == "critical_point"

    @property
    def stepsize_mean(self):
        if not self.trace:
            return float("nan")
        return float(np.mean([rec.t for rec in self.trace]))


def _canonical_mode(name):
    mode = _ALIASES.get(name, name)
    if mode not in _MODES:
        raise ValueError(f"unknown algorithm {name!r}; choose from {sorted(_MODES)}")
    return mode


def _fixed_alphas(problem, mode, cfg):
    """Constant alpha vector for the non-BB modes, with prerequisite checks."""
    m = problem.m
    if mode == "pgmo_ls":
        ell = 1.0 if cfg.ell is None else float(cfg.ell)
        if ell <= 0:
            raise ValueError("pgmo_ls needs ell > 0")
        return np.full(m, ell)
    if mode == "pgmo_fixed":
        Ls = problem.lipschitz_constants()
        if Ls is None or np.any(Ls < 0):
            raise ValueError("pgmo_fixed needs known Lipschitz constants")
        L_max = float(np.max(Ls))
        if L_max <= 0:
            raise ValueError("pgmo_fixed needs a positive L_max")
        ell = L_max if cfg.ell is None else float(cfg.ell)
        if ell <= 0.5 * L_max:
            raise ValueError(
                f"pgmo_fixed needs ell > L_max / 2 = {0.5 * L_max:g}, got {ell:g}"
            )
        return np.full(m, ell)
    if mode == "pgmo_mu":
        mus = problem.strong_moduli()
        if mus is None or np.any(mus <= 0):
            raise ValueError("pgmo_mu needs positive strong convexity moduli")
        return mus.copy()
    if mode == "pgmo_separate":
        Ls = problem.lipschitz_constants()
        if Ls is None or np.any(Ls <= 0):
            raise ValueError("pgmo_separate needs positive Lipschitz constants")
        return Ls.copy()
    return None  # BB modes compute alphas per iteration


def _prepare_start(problem, x0):
    x = np.array(x0, dtype=float, copy=True)
    if x.shape != (problem.n,):
        raise ValueError(f"x0 must have shape ({problem.n},)")
    projected = False
    kind = problem.nonsmooth
    if isinstance(kind, SimplexIndicator) and not kind.contains(x):
        x = project_simplex(x)
        projected = True
    elif isinstance(kind, BoxIndicator) and not kind.contains(x):
        x = project_box(x, *kind.arrays())
        projected = True
    if problem.bounds is not None:
        lo, hi = problem.bounds
        clipped = np.clip(x, lo, hi)
        if np.any(clipped != x):
            projected = True
        x = clipped
    return x, projected


def _solve_direction(inp, cfg, counters, warnings, warm_lambda=None):
    """Dual solve with adaptive accuracy and the soft-failure policy.

    The duality-gap target tightens until gap <= 0.05 * ||d||^2, which turns
    the certificate model_i <= alpha_i * (gap - ||d||^2) into a strictly
    negative per-objective model decrease, so the line search never sees a
    non-descent direction for a non-critical iterate. Returns (result, ok).
    A capped dual solve is still usable when its best direction carries the
    descent certificate; otherwise the caller must abort with dual_failure.
    """
    try:
        fw = cfg.fw
        res = frank_wolfe_solve(inp, fw, counters, warm_lambda=warm_lambda)
        for _ in range(4):
            if res.d_norm <= cfg.d_tol:
                break  # caller stops here; no certificate needed
            need = 0.05 * res.d_norm**2
            if res.fw_gap <= need:
                break
            fw = replace(fw, gap_tol=need)
            res = frank_wolfe_solve(inp, fw, counters, warm_lambda=res.lam)
        return res, True
    except DualSolveError as err:
        res = err.result
        if res is None:
            warnings.append(str(err))
            return None, False
        dd = float(np.dot(res.d, res.d))
        certified = np.all(
            res.model_decrease <= -inp.alphas * dd + _DESCENT_SLACK
        )
        if certified and res.d_norm > 0:
            warnings.append(
                f"dual solve capped with gap {res.fw_gap:.2e}; "
                "using best lambda (descent certificate holds)"
            )
            return res, True
        warnings.append(str(err))
        return res, False


def solve(problem, x0, cfg=None):
    """Run one solver mode from x0; returns a SolveReport.

    The initial F(x0) evaluation is not counted (feval totals count only the
    work done by the iteration itself, so fixed-step runs show one feval per
    iteration).
    """
    cfg = cfg or SolverConfig()
    mode = _canonical_mode(cfg.algorithm)
    started = time.perf_counter()
    counters = EvalCounters()

    x, x0_projected = _prepare_start(problem, x0)
    f = problem.smooth_values(x)
    F = f + problem.g_values(x)
    grads = problem.jacobian(x, counters)
    state = IterateState(x=x, F=F, f=f, grads=grads)

    alphas_fixed = _fixed_alphas(problem, mode, cfg)
    memory = None
    if mode in ("bbpgmo", "abbpgmo"):
        x_prev = state.x - cfg.x_minus_offset
        memory = BBMemory(x_prev, problem.jacobian(x_prev, counters))

    bounds = problem.bounds
    trace = []
    warnings = []
    status = "max_iters"
    final_direction = None
    prev_lambda = None

    for k in range(cfg.max_iters):
        iter_started = time.perf_counter()
        if alphas_fixed is None:
            alphas = bb_stepsizes(memory, state.x, state.grads, cfg.bb)
        else:
            alphas = alphas_fixed

        inp = SubproblemInput(
            x=state.x,
            grads=state.grads,
            alphas=alphas,
            kind=problem.nonsmooth,
            g_at_x=problem.g_values(state.x),
        )
        res, ok = _solve_direction(
            inp, cfg, counters, warnings, warm_lambda=prev_lambda
        )
        if not ok:
            status = "dual_failure"
            final_direction = res
            break
        if res.d_norm <= cfg.d_tol:
            status = "critical_point"
            final_direction = res
            break

        t_cap = 1.0
        if bounds is not None:
            t_cap = max_feasible_step(state.x, res.d, bounds[0], bounds[1])
            if t_cap < 1e-12:
                # pinned on a box face with the direction pointing outward:
                # no feasible progress exists along d
                status = "critical_point"
                final_direction = res
                warnings.append("stopped on a box face with an outward direction")
                break

        inflations = None
        backtracks = 0
        if mode in _LINE_SEARCH_MODES:
            try:
                t, F_new, backtracks = armijo_search(
                    problem,
                    state.x,
                    res.d,
                    state.F,
                    res.model_decrease,
                    cfg.ls,
                    t_cap=t_cap,
                    counters=counters,
                )
            except LineSearchError as err:
                status = "line_search_failure"
                warnings.append(str(err))
                final_direction = res
                break
            x_new = state.x + t * res.d
            f_new = None
        elif mode in ("pgmo_fixed", "pgmo_separate"):
            t = t_cap
            x_new = state.x + t * res.d
            F_new = problem.evaluate_F(x_new, counters)
            f_new = None
        else:  # abbpgmo
            stepped = _abbpgmo_step(
                problem, state, alphas, res, t_cap, cfg, counters, warnings
            )
            if stepped is None:
                status = "dual_failure"
                final_direction = res
                break
            res, alphas, t, x_new, f_new, F_new, inflations, crit = stepped
            if crit:
                status = "critical_point"
                final_direction = res
                break

        if bounds is not None:
            np.clip(x_new, bounds[0], bounds[1], out=x_new)
        if not np.any(x_new != state.x):
            status = "line_search_failure"
            warnings.append("accepted step underflowed; iterate unchanged")
            final_direction = res
            break

        if memory is not None:
            memory.update(state.x, state.grads)
        prev_lambda = res.lam
        state.x = x_new
        state.F = F_new
        if f_new is not None:
            state.f = f_new  # only abbpgmo keeps smooth parts current
        state.grads = problem.jacobian(state.x, counters)
        trace.append(
            TraceRecord(
                k=k,
                d_norm=res.d_norm,
                t=t,
                alphas=np.array(alphas, copy=True),
                lam=res.lam,
                x=state.x.copy(),
                F=state.F.copy(),
                fw_gap=res.fw_gap,
                model_decrease=res.model_decrease.copy(),
                backtracks=backtracks,
                inflations=inflations,
                time_s=time.perf_counter() - iter_started,
            )
        )

    return SolveReport(
        status=status,
        x=state.x,
        F=state.F,
        iterations=len(trace),
        counters=counters,
        trace=trace,
        total_time=time.perf_counter() - started,
        warnings=warnings,
        final_direction=final_direction,
        x0_projected=x0_projected,
    )


def _abbpgmo_step(problem, state, alphas, res, t_cap, cfg, counters, warnings):
    """Inflate alphas until every smooth part obeys its quadratic bound.

    Checks f_i(x + t d) - f_i(x) <= t <grad f_i, d> + (alpha_i / 2) ||t d||^2
    at the candidate iterate, multiplying the violators' alpha by tau and
    re-solving the direction subproblem (lambda warm-started) until all hold.
    Each check costs one feval. Termination is guaranteed because a violation
    implies alpha_i < L_i, so alpha_i stays below tau * L_i forever.
    """
    alphas = np.array(alphas, copy=True)
    inflations = np.zeros(problem.m, dtype=int)
    f_at_x = state.f
    g_at_x = problem.g_values(state.x)
    while True:
        t = t_cap
        delta = t * res.d
        x_trial = state.x + delta
        f_trial = problem.smooth_values(x_trial, counters)
        counters.F_evals += 1
        quad = state.grads @ delta + 0.5 * alphas * float(np.dot(delta, delta))
        slack = _ABB_CHECK_SLACK * np.maximum(
            1.0, np.maximum(np.abs(f_trial), np.abs(f_at_x))
        )
        violated = f_trial - f_at_x > quad + slack
        if not violated.any():
            F_new = f_trial + problem.g_values(x_trial)
            return res, alphas, t, x_trial, f_trial, F_new, inflations, False
        alphas[violated] *= cfg.tau
        inflations[violated] += 1
        inp = SubproblemInput(
            x=state.x,
            grads=state.grads,
            alphas=alphas,
            kind=problem.nonsmooth,
            g_at_x=g_at_x,
        )
        res, ok = _solve_direction(inp, cfg, counters, warnings, warm_lambda=res.lam)
        if not ok:
            return None
        if res.d_norm <= cfg.d_tol:
            return res, alphas, 0.0, state.x, f_at_x, state.F, inflations, True
        if problem.bounds is not None:
            t_cap = max_feasible_step(state.x, res.d, *problem.bounds)
            if t_cap < 1e-12:
                return res, alphas, 0.0, state.x, f_at_x, state.F, inflations, True


def pareto_sweep(problem, starts, cfg=None):
    """Independent solves from each start, in order; returns the reports."""
    return [solve(problem, x0, cfg) for x0 in starts]
