"""Merit functions measuring distance from criticality / weak optimality.

The regularized gap merit with curvature ell > 0 and weights alpha_i > 0 is

    w(x) = max_y min_i [ (<grad f_i(x), x - y> + g_i(x) - g_i(y)) / alpha_i
                         - (ell / 2) ||x - y||^2 ],

nonnegative everywhere and zero exactly at critical points. Substituting
y = x + d shows w(x) = ell * W(x; ell * alpha) where W(x; beta) is the same
merit with unit curvature, and W equals the negated optimal value of the
direction subproblem at inverse stepsizes beta. So one dual solve prices it.

The global counterpart

    u0(x) = sup_y min_i (F_i(x) - F_i(y)) / alpha_i

certifies weak optimality (zero iff weakly optimal). It has no closed form;
``weak_pareto_gap_grid`` brute-forces the sup over a finite grid and is
therefore a lower bound of the true value.
"""

from __future__ import annotations

import itertools

import numpy as np

from .direction import FWConfig, SubproblemInput, frank_wolfe_solve


def merit_gap(problem, x, alphas, ell=1.0, fw=None, counters=None):
    """Regularized gap merit w(x) via one dual solve at beta = ell * alphas."""
    if ell <= 0:
        raise ValueError("ell must be positive")
    x = np.asarray(x, dtype=float)
    alphas = np.asarray(alphas, dtype=float)
    inp = SubproblemInput(
        x=x,
        grads=problem.jacobian(x, counters),
        alphas=ell * alphas,
        kind=problem.nonsmooth,
        g_at_x=problem.g_values(x),
    )
    res = frank_wolfe_solve(inp, fw or FWConfig(), counters)
    # dual_value is the primal optimum (a min), so its negation is the merit
    return ell * (-res.dual_value)


def weak_pareto_gap_grid(problem, x, alphas, lower, upper, resolution=101):
    """Grid lower bound of u0(x); exact up to grid resolution for n <= 3.

    Grid points where any F_i is infinite (indicator kinds) are skipped.
    """
    if problem.n > 3:
        raise ValueError("grid scan is limited to n <= 3")
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    x = np.asarray(x, dtype=float)
    alphas = np.asarray(alphas, dtype=float)
    lower = np.broadcast_to(np.asarray(lower, dtype=float), (problem.n,))
    upper = np.broadcast_to(np.asarray(upper, dtype=float), (problem.n,))
    Fx = problem.smooth_values(x) + problem.g_values(x)
    if not np.all(np.isfinite(Fx)):
        raise ValueError("x itself must have finite objective values")

    axes = [np.linspace(lower[j], upper[j], resolution) for j in range(problem.n)]
    best = -np.inf
    for point in itertools.product(*axes):
        y = np.asarray(point)
        Fy = problem.smooth_values(y) + problem.g_values(y)
        if not np.all(np.isfinite(Fy)):
            continue
        best = max(best, float(np.min((Fx - Fy) / alphas)))
    return best
