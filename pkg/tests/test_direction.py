"""Tests for the direction subproblem and its simplex dual.

The direction d at x minimizes max_i model_i(d)/alpha_i + ||d||^2/2 where
model_i(d) = <grad f_i, d> + g_i(x+d) - g_i(x). The dual minimizes omega
over the simplex; the prox formula recovers d from any multiplier vector.
"""

import numpy as np
import pytest

from moprox.direction import (
    FWConfig,
    SubproblemInput,
    direction_model_value,
    dual_gradient,
    dual_objective,
    frank_wolfe_solve,
    recover_direction,
)
from moprox.exceptions import DualSolveError, EvaluationError
from moprox.prox import BoxIndicator, SimplexIndicator, WeightedL1, Zero


def _random_input(rng, n=4, m=3, kind=None, x=None):
    if kind is None:
        kind = Zero()
    if x is None:
        x = rng.normal(size=n)
        if isinstance(kind, SimplexIndicator):
            x = rng.dirichlet(np.ones(n))
        elif isinstance(kind, BoxIndicator):
            lo, hi = kind.arrays()
            x = rng.uniform(lo, hi)
    grads = rng.normal(size=(m, n)) * rng.uniform(0.5, 3.0)
    alphas = rng.uniform(0.05, 20.0, size=m)
    return SubproblemInput(x=x, grads=grads, alphas=alphas, kind=kind)


def _interior_lambda(rng, m):
    lam = rng.dirichlet(np.ones(m))
    lam = 0.9 * lam + 0.1 / m  # keep away from the boundary for central FD
    return lam / lam.sum()


def _kinds_for(rng, n, m):
    return (
        Zero(),
        WeightedL1(coeffs=tuple(rng.uniform(0.05, 1.0, size=m))),
        BoxIndicator(lower=(-1.5,) * n, upper=(1.5,) * n),
        SimplexIndicator(),
    )


def primal_grid_min(inp, span=4.0, points=241, refinements=2):
    """Brute-force the planar primal by nested grid scans (n = 2 only).

    Vectorized over the grid; each refinement shrinks the window to one
    coarse cell around the incumbent, so the final resolution is
    span / points^refinements.
    """
    from moprox.prox import g_vector

    g_at_x = g_vector(inp.kind, inp.x, inp.m)

    def scan(c1, c2, half):
        xs = np.linspace(c1 - half, c1 + half, points)
        ys = np.linspace(c2 - half, c2 + half, points)
        D1, D2 = np.meshgrid(xs, ys, indexing="ij")
        P1 = inp.x[0] + D1
        P2 = inp.x[1] + D2
        lin = np.einsum("ik,kab->iab", inp.grads, np.stack([D1, D2]))
        if isinstance(inp.kind, WeightedL1):
            coeffs = np.asarray(inp.kind.coeffs)
            l1 = np.abs(P1) + np.abs(P2)
            gdiff = coeffs[:, None, None] * (l1 - np.abs(inp.x).sum())
        else:
            gdiff = (g_at_x * 0.0)[:, None, None]
        vals = np.max(
            (lin + gdiff) / inp.alphas[:, None, None], axis=0
        ) + 0.5 * (D1**2 + D2**2)
        flat = int(np.argmin(vals))
        i, j = np.unravel_index(flat, vals.shape)
        return float(vals[i, j]), float(D1[i, j]), float(D2[i, j])

    v, a, b = scan(0.0, 0.0, span)
    h = 2.0 * span / (points - 1)
    for _ in range(refinements):
        v, a, b = scan(a, b, h)
        h = 2.0 * h / (points - 1)
    return v


class TestClosedForms:
    def test_single_objective_unconstrained(self):
        """m = 1, g = 0: d = -grad/alpha and value -||d||^2/2."""
        grad = np.array([[2.0, 0.0]])
        inp = SubproblemInput(
            x=np.zeros(2), grads=grad, alphas=np.array([1.0]), kind=Zero()
        )
        res = frank_wolfe_solve(inp)
        np.testing.assert_allclose(res.d, [-2.0, 0.0], atol=1e-12)
        assert res.dual_value == pytest.approx(-2.0, abs=1e-12)
        np.testing.assert_allclose(res.lam, [1.0])

    def test_two_objectives_unconstrained_closed_form(self):
        """m = 2, g = 0, unit alphas: lambda* clips the projection ratio."""
        rng = np.random.default_rng(12)
        for _ in range(100):
            v = rng.normal(size=(2, 3)) * rng.uniform(0.2, 4.0)
            inp = SubproblemInput(
                x=rng.normal(size=3),
                grads=v,
                alphas=np.ones(2),
                kind=Zero(),
            )
            res = frank_wolfe_solve(inp)
            diff = v[0] - v[1]
            denom = float(diff @ diff)
            if denom < 1e-18:
                lam_star = 1.0  # any multiplier works when gradients agree
            else:
                lam_star = float(np.clip((v[1] - v[0]) @ v[1] / denom, 0.0, 1.0))
            u_star = lam_star * v[0] + (1.0 - lam_star) * v[1]
            np.testing.assert_allclose(res.d, -u_star, atol=1e-9)

    def test_critical_point_yields_zero_direction(self):
        """A common minimizer produces d = 0 and zero model value."""
        inp = SubproblemInput(
            x=np.zeros(3),
            grads=np.zeros((2, 3)),
            alphas=np.array([1.0, 2.0]),
            kind=Zero(),
        )
        res = frank_wolfe_solve(inp)
        np.testing.assert_allclose(res.d, np.zeros(3), atol=1e-14)
        assert res.dual_value == pytest.approx(0.0, abs=1e-14)


class TestDualFunction:
    def test_gradient_matches_finite_differences(self):
        """Central differences on omega reproduce the analytic gradient."""
        rng = np.random.default_rng(21)
        h = 1e-6
        for trial in range(20):
            n = int(rng.integers(2, 6))
            m = int(rng.integers(2, 5))
            for kind in _kinds_for(rng, n, m):
                inp = _random_input(rng, n=n, m=m, kind=kind)
                for _ in range(5):
                    lam = _interior_lambda(rng, m)
                    grad = dual_gradient(inp, lam)
                    for i in range(m - 1):
                        # probe along a simplex-tangent coordinate pair
                        e = np.zeros(m)
                        e[i] = 1.0
                        e[-1] = -1.0
                        fp = dual_objective(inp, lam + h * e)
                        fm = dual_objective(inp, lam - h * e)
                        fd = (fp - fm) / (2.0 * h)
                        an = grad[i] - grad[-1]
                        assert fd == pytest.approx(
                            an, rel=1e-5, abs=1e-7
                        ), (trial, type(kind).__name__)

    def test_weak_duality_and_gap_bound(self):
        """primal(d(lam)) sits within fw_gap above -omega(lam), for any lam."""
        rng = np.random.default_rng(22)
        for _ in range(100):
            n = int(rng.integers(2, 6))
            m = int(rng.integers(2, 5))
            kind = _kinds_for(rng, n, m)[int(rng.integers(4))]
            inp = _random_input(rng, n=n, m=m, kind=kind)
            lam = rng.dirichlet(np.ones(m))
            omega = dual_objective(inp, lam)
            d = recover_direction(inp, lam)
            primal = direction_model_value(inp, d)
            res_gap = None
            # the gap computed at lam certifies the suboptimality of d(lam)
            from moprox.direction import _Evaluator

            _p, _d, q, gap = _Evaluator(inp).query(lam)
            assert primal >= -omega - 1e-10
            assert primal + omega <= gap + 1e-10

    def test_dual_value_is_primal_optimum(self):
        """At the solver's multiplier the duality gap closes."""
        rng = np.random.default_rng(23)
        for _ in range(50):
            m = int(rng.integers(2, 5))
            inp = _random_input(rng, n=4, m=m, kind=Zero())
            res = frank_wolfe_solve(inp)
            primal = direction_model_value(inp, res.d)
            assert primal == pytest.approx(res.dual_value, abs=max(1e-8, 10 * res.fw_gap))


class TestSolutionCertificates:
    def test_descent_certificate(self):
        """model_i <= alpha_i (gap - ||d||^2) at every solution."""
        rng = np.random.default_rng(31)
        for _ in range(100):
            n = int(rng.integers(2, 6))
            m = int(rng.integers(1, 5))
            kind = _kinds_for(rng, n, m)[int(rng.integers(4))]
            inp = _random_input(rng, n=n, m=m, kind=kind)
            res = frank_wolfe_solve(inp)
            bound = inp.alphas * (res.fw_gap - res.d_norm**2)
            assert np.all(res.model_decrease <= bound + 1e-10)

    def test_scaled_decreases_equal_on_active_set(self):
        """Active multipliers equalize model_i / alpha_i at the optimum."""
        rng = np.random.default_rng(32)
        for _ in range(100):
            m = int(rng.integers(2, 5))
            inp = _random_input(rng, n=5, m=m, kind=Zero())
            res = frank_wolfe_solve(inp)
            act = res.lam >= 1e-6
            if act.sum() < 2:
                continue
            q = res.model_decrease[act] / inp.alphas[act]
            assert q.max() - q.min() <= max(1e-6, 10.0 * res.fw_gap)

    def test_never_ascent(self):
        """Solutions never predict increase: max_i model_i <= gap-slack."""
        rng = np.random.default_rng(33)
        for _ in range(100):
            inp = _random_input(rng, n=3, m=2, kind=Zero())
            res = frank_wolfe_solve(inp)
            assert np.max(res.model_decrease) <= res.fw_gap * np.max(inp.alphas) + 1e-12


class TestGridOracle:
    def test_dual_optimum_matches_grid(self):
        rng = np.random.default_rng(41)
        for _ in range(6):
            kind = (Zero(), WeightedL1(coeffs=(0.5, 0.25)))[int(rng.integers(2))]
            inp = _random_input(rng, n=2, m=2, kind=kind)
            res = frank_wolfe_solve(inp)
            grid_val = primal_grid_min(inp)
            assert res.dual_value == pytest.approx(grid_val, abs=1e-5)


class TestWarmStart:
    def test_warm_start_reaches_same_solution(self):
        rng = np.random.default_rng(51)
        for _ in range(50):
            m = int(rng.integers(2, 5))
            inp = _random_input(rng, n=4, m=m, kind=Zero())
            cold = frank_wolfe_solve(inp)
            warm = frank_wolfe_solve(inp, warm_lambda=rng.dirichlet(np.ones(m)))
            assert warm.dual_value == pytest.approx(cold.dual_value, abs=1e-8)
            np.testing.assert_allclose(warm.d, cold.d, atol=1e-5)

    def test_degenerate_warm_start_ignored(self):
        inp = SubproblemInput(
            x=np.zeros(2),
            grads=np.array([[1.0, 0.0], [0.0, 1.0]]),
            alphas=np.ones(2),
            kind=Zero(),
        )
        res = frank_wolfe_solve(inp, warm_lambda=np.zeros(2))
        assert np.all(res.lam >= 0.0)
        assert res.lam.sum() == pytest.approx(1.0)


class TestInputValidation:
    def test_bad_shapes_rejected(self):
        with pytest.raises(ValueError):
            SubproblemInput(
                x=np.zeros(2), grads=np.zeros((2, 3)), alphas=np.ones(2), kind=Zero()
            )
        with pytest.raises(ValueError):
            SubproblemInput(
                x=np.zeros(2), grads=np.zeros((2, 2)), alphas=np.ones(3), kind=Zero()
            )

    def test_nonpositive_alpha_rejected(self):
        with pytest.raises(ValueError):
            SubproblemInput(
                x=np.zeros(2),
                grads=np.zeros((1, 2)),
                alphas=np.array([0.0]),
                kind=Zero(),
            )

    def test_nonfinite_gradient_rejected(self):
        with pytest.raises(EvaluationError):
            SubproblemInput(
                x=np.zeros(2),
                grads=np.array([[np.nan, 0.0]]),
                alphas=np.ones(1),
                kind=Zero(),
            )

    def test_infeasible_base_point_rejected(self):
        with pytest.raises(EvaluationError):
            SubproblemInput(
                x=np.array([2.0, 2.0]),
                grads=np.ones((1, 2)),
                alphas=np.ones(1),
                kind=SimplexIndicator(),
            )


class TestDualSolveFailure:
    def test_iteration_cap_attaches_best_result(self):
        """A starved iteration budget raises but carries the best iterate."""
        rng = np.random.default_rng(61)
        inp = _random_input(rng, n=6, m=4, kind=Zero())
        with pytest.raises(DualSolveError) as info:
            frank_wolfe_solve(inp, FWConfig(gap_tol=1e-15, max_iters=1))
        assert info.value.result is not None
        assert info.value.result.d.shape == (6,)
