"""Composite multiobjective problem model.

A problem is m objectives F_i = f_i + g_i on R^n with every f_i smooth
(values and gradients supplied as callables) and the g_i drawn from one of the
closed-form families in :mod:`moprox.prox`. Optional box bounds restrict the
iterates; they are enforced by the solvers through step capping, not through
the nonsmooth terms.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import EvaluationError
from .prox import BoxIndicator, SimplexIndicator, Zero, g_vector


@dataclass
class EvalCounters:
    """Work counters accumulated by a solve.

    ``F_evals`` counts full objective-vector evaluations (the headline feval
    measure), ``f_evals`` the underlying per-component smooth evaluations,
    ``grad_evals`` per-component gradient evaluations and ``prox_evals`` calls
    to the combined proximal operator.
    """

    F_evals: int = 0
    f_evals: int = 0
    grad_evals: int = 0
    prox_evals: int = 0

    def merge(self, other):
        self.F_evals += other.F_evals
        self.f_evals += other.f_evals
        self.grad_evals += other.grad_evals
        self.prox_evals += other.prox_evals


@dataclass(frozen=True)
class SmoothComponent:
    """One smooth objective term f_i.

    Parameters
    ----------
    value : callable
        x -> float.
    gradient : callable
        x -> (n,) array.
    lipschitz : float or None
        Gradient Lipschitz constant L_i when known.
    strong_mu : float or None
        Strong convexity modulus mu_i when known (0 means merely convex).
    """

    value: object
    gradient: object
    lipschitz: float | None = None
    strong_mu: float | None = None


@dataclass(frozen=True)
class MCOProblem:
    """m smooth components plus one nonsmooth family plus optional bounds."""

    n: int
    smooth: tuple
    nonsmooth: object = field(default_factory=Zero)
    bounds: tuple | None = None  # (lower (n,), upper (n,)) or None
    name: str = ""

    def __post_init__(self):
        if self.n <= 0:
            raise ValueError("n must be positive")
        if len(self.smooth) == 0:
            raise ValueError("need at least one objective")
        if self.bounds is not None:
            lo = np.asarray(self.bounds[0], dtype=float)
            hi = np.asarray(self.bounds[1], dtype=float)
            if lo.shape != (self.n,) or hi.shape != (self.n,):
                raise ValueError("bounds must be two (n,) arrays")
            if np.any(lo > hi):
                raise ValueError("empty box: a lower bound exceeds its upper bound")
            lo.flags.writeable = False
            hi.flags.writeable = False
            object.__setattr__(self, "bounds", (lo, hi))
        object.__setattr__(self, "smooth", tuple(self.smooth))

    @property
    def m(self):
        return len(self.smooth)

    def _check_point(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n,):
            raise ValueError(f"expected point of shape ({self.n},), got {x.shape}")
        return x

    def smooth_values(self, x, counters=None):
        """(f_1(x), ..., f_m(x)); raises EvaluationError on nonfinite output."""
        x = self._check_point(x)
        out = np.empty(self.m)
        for i, comp in enumerate(self.smooth):
            fi = float(comp.value(x))
            if not np.isfinite(fi):
                raise EvaluationError(
                    f"objective {i} returned nonfinite smooth value {fi!r}",
                    objective=i,
                )
            out[i] = fi
        if counters is not None:
            counters.f_evals += self.m
        return out

    def g_values(self, x):
        """(g_1(x), ..., g_m(x)) as extended reals (+inf when infeasible)."""
        return g_vector(self.nonsmooth, self._check_point(x), self.m)

    def evaluate_F(self, x, counters=None):
        """Full objective vector F(x) = f(x) + g(x).

        Counts one F evaluation (and m smooth evaluations) when counters are
        given. Raises EvaluationError if any component is nonfinite, which
        includes querying an indicator kind outside its set.
        """
        f = self.smooth_values(x, counters)
        g = self.g_values(x)
        F = f + g
        if counters is not None:
            counters.F_evals += 1
        bad = np.nonzero(~np.isfinite(F))[0]
        if bad.size:
            raise EvaluationError(
                f"objective {bad[0]} is nonfinite at the queried point",
                objective=int(bad[0]),
            )
        return F

    def jacobian(self, x, counters=None):
        """(m, n) matrix of smooth gradients; counts m gradient evaluations."""
        x = self._check_point(x)
        J = np.empty((self.m, self.n))
        for i, comp in enumerate(self.smooth):
            gi = np.asarray(comp.gradient(x), dtype=float)
            if gi.shape != (self.n,):
                raise ValueError(
                    f"gradient {i} has shape {gi.shape}, expected ({self.n},)"
                )
            if not np.all(np.isfinite(gi)):
                raise EvaluationError(
                    f"objective {i} returned a nonfinite gradient", objective=i
                )
            J[i] = gi
        if counters is not None:
            counters.grad_evals += self.m
        return J

    def lipschitz_constants(self):
        """(m,) array of L_i, or None if any component lacks one."""
        Ls = [c.lipschitz for c in self.smooth]
        if any(L is None for L in Ls):
            return None
        return np.array([float(L) for L in Ls])

    def strong_moduli(self):
        """(m,) array of mu_i, or None if any component lacks one."""
        mus = [c.strong_mu for c in self.smooth]
        if any(mu is None for mu in mus):
            return None
        return np.array([float(mu) for mu in mus])

    def is_feasible(self, x):
        """Membership in the indicator set and the box (within tiny slack)."""
        x = self._check_point(x)
        if isinstance(self.nonsmooth, (BoxIndicator, SimplexIndicator)):
            if not self.nonsmooth.contains(x):
                return False
        if self.bounds is not None:
            lo, hi = self.bounds
            slack = 1e-12 * (1.0 + np.maximum(np.abs(lo), np.abs(hi)))
            if np.any(x < lo - slack) or np.any(x > hi + slack):
                return False
        return True


def check_jacobian(problem, x, rel_step=1e-6, rtol=1e-5):
    """Compare analytic gradients against central differences.

    Returns the worst relative error; raises AssertionError above ``rtol``.
    Step per coordinate is rel_step * (1 + |x_j|).
    """
    x = np.asarray(x, dtype=float)
    J = problem.jacobian(x)
    J_fd = np.empty_like(J)
    for j in range(problem.n):
        h = rel_step * (1.0 + abs(x[j]))
        xp = x.copy()
        xm = x.copy()
        xp[j] += h
        xm[j] -= h
        fp = problem.smooth_values(xp)
        fm = problem.smooth_values(xm)
        J_fd[:, j] = (fp - fm) / (2.0 * h)
    scale = np.maximum(np.abs(J), 1.0)
    err = float(np.max(np.abs(J - J_fd) / scale))
    if err > rtol:
        raise AssertionError(f"jacobian mismatch: relative error {err:.3e} > {rtol:g}")
    return err
