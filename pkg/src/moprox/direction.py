"""Descent direction subproblem, solved through its simplex dual.

At a point x with per-objective inverse stepsizes alpha_i > 0, the direction
is the minimizer of

    max_i [ (<grad f_i(x), d> + g_i(x + d) - g_i(x)) / alpha_i ]  +  ||d||^2 / 2.

Dualizing the max with weights lambda on the unit simplex gives a smooth
convex dual

    omega(lambda) = ||u||^2 / 2 + sum_i lambda_i g_i(x) / alpha_i
                    - env(x - u),      u = sum_i lambda_i grad f_i(x) / alpha_i,

where env is the Moreau envelope of sum_i (lambda_i / alpha_i) g_i, so every
dual query costs one combined prox. Its gradient is

    d omega / d lambda_i = -(model decrease)_i / alpha_i

with (model decrease)_i = <grad f_i(x), d> + g_i(x + d) - g_i(x) evaluated at
the prox point, which makes the Frank-Wolfe gap the spread between the worst
and the lambda-averaged scaled model decreases. The primal direction is
recovered as d = prox(x - u) - x.

The dual is minimized by Frank-Wolfe with exact segment minimization (the
directional derivative is piecewise linear in lambda for every supported
nonsmooth kind, so a sign bisection plus one secant step is exact). For two
objectives the whole simplex is one segment and the solve reduces to a single
bracketed root find on [0, 1]. With three or more objectives, pairwise
mass-exchange steps provide the certificate and global progress, while a
Newton step on the current face (the prox is piecewise affine, so omega has
a closed-form Hessian on each piece) supplies the local rate that plain
conditional-gradient steps lack when the alpha_i are badly imbalanced.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import DualSolveError, EvaluationError
from .prox import BoxIndicator, SimplexIndicator, WeightedL1, Zero, g_vector


@dataclass(frozen=True)
class FWConfig:
    # tight enough that alpha_max * gap stays below descent-certificate
    # tolerances even at the 1e3 stepsize clamp
    gap_tol: float = 1e-12
    max_iters: int = 2000

    def __post_init__(self):
        if self.gap_tol <= 0 or self.max_iters < 1:
            raise ValueError("gap_tol must be positive and max_iters >= 1")


@dataclass(frozen=True)
class SubproblemInput:
    """Frozen per-iteration data for one direction solve."""

    x: np.ndarray
    grads: np.ndarray     # (m, n)
    alphas: np.ndarray    # (m,) positive
    kind: object
    g_at_x: np.ndarray | None = None
    scaled_grads: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        grads = np.asarray(self.grads, dtype=float)
        alphas = np.asarray(self.alphas, dtype=float)
        if grads.ndim != 2 or grads.shape[1] != x.size:
            raise ValueError("grads must be (m, n) matching x")
        if alphas.shape != (grads.shape[0],):
            raise ValueError("alphas must be (m,)")
        if not np.all(np.isfinite(alphas)) or np.any(alphas <= 0):
            raise ValueError("alphas must be finite and positive")
        if not np.all(np.isfinite(grads)):
            raise EvaluationError("nonfinite gradient entry in subproblem input")
        g_at_x = self.g_at_x
        if g_at_x is None:
            g_at_x = g_vector(self.kind, x, grads.shape[0])
        else:
            g_at_x = np.asarray(g_at_x, dtype=float)
        if not np.all(np.isfinite(g_at_x)):
            raise EvaluationError(
                "g is infinite at the base point (infeasible for indicator kind)"
            )
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "grads", grads)
        object.__setattr__(self, "alphas", alphas)
        object.__setattr__(self, "g_at_x", g_at_x)
        object.__setattr__(self, "scaled_grads", grads / alphas[:, None])

    @property
    def m(self):
        return self.grads.shape[0]


@dataclass
class DirectionResult:
    d: np.ndarray
    lam: np.ndarray
    dual_value: float          # primal optimum: -omega(lam) at the solution
    fw_gap: float
    model_decrease: np.ndarray  # (m,), <grad f_i, d> + g_i(x+d) - g_i(x)
    prox_point: np.ndarray

    @property
    def d_norm(self):
        return float(np.linalg.norm(self.d))


def _gdiff_fn(inp):
    """Closure p -> (m,) of g_i(p) - g_i(x), avoiding generic dispatch."""
    if isinstance(inp.kind, WeightedL1):
        coeffs = np.asarray(inp.kind.coeffs)
        nx1 = float(np.sum(np.abs(inp.x)))

        def gdiff(p):
            return coeffs * (float(np.sum(np.abs(p))) - nx1)

        return gdiff
    zeros = np.zeros(inp.m)

    def gdiff(_p):
        # indicator kinds: prox output is feasible, so g vanishes at both ends
        return zeros

    return gdiff


class _Evaluator:
    """Shared dual-query state: one prox per query, counters threaded."""

    def __init__(self, inp, counters=None):
        self.inp = inp
        self.counters = counters
        self.gdiff = _gdiff_fn(inp)
        self.gx_scaled = inp.g_at_x / inp.alphas

    def query(self, lam):
        """Returns (prox point, d, q, gap) with q_i = model_i / alpha_i."""
        inp = self.inp
        u = inp.scaled_grads.T @ lam
        base = inp.x - u
        p = inp.kind.prox(lam / inp.alphas, base)
        if self.counters is not None:
            self.counters.prox_evals += 1
        d = p - inp.x
        model = inp.grads @ d + self.gdiff(p)
        q = model / inp.alphas
        gap = float(np.max(q) - np.dot(lam, q))
        return p, d, q, max(gap, 0.0)

    def omega(self, lam, p=None):
        inp = self.inp
        u = inp.scaled_grads.T @ lam
        base = inp.x - u
        if p is None:
            p = inp.kind.prox(lam / inp.alphas, base)
            if self.counters is not None:
                self.counters.prox_evals += 1
        w = lam / inp.alphas
        g_p = g_vector(inp.kind, p, inp.m)
        envelope = float(np.dot(w, g_p)) + 0.5 * float(np.dot(p - base, p - base))
        return (
            0.5 * float(np.dot(u, u))
            + float(np.dot(lam, self.gx_scaled))
            - envelope
        )

    def result(self, lam):
        p, d, q, gap = self.query(lam)
        return DirectionResult(
            d=d,
            lam=np.array(lam, dtype=float, copy=True),
            dual_value=-self.omega(lam, p=p),
            fw_gap=gap,
            model_decrease=q * self.inp.alphas,
            prox_point=p,
        )


def dual_objective(inp, lam, counters=None):
    """omega(lambda): the smooth convex function minimized over the simplex.

    Its negated minimum equals the optimal value of the direction model.
    """
    lam = np.asarray(lam, dtype=float)
    return _Evaluator(inp, counters).omega(lam)


def dual_gradient(inp, lam, counters=None):
    """Gradient of omega: -(model decrease)_i / alpha_i at the prox point."""
    lam = np.asarray(lam, dtype=float)
    _p, _d, q, _gap = _Evaluator(inp, counters).query(lam)
    return -q


def recover_direction(inp, lam, counters=None):
    """Primal direction prox(x - sum_i lambda_i grad f_i / alpha_i) - x."""
    lam = np.asarray(lam, dtype=float)
    _p, d, _q, _gap = _Evaluator(inp, counters).query(lam)
    return d


def direction_model_value(inp, d):
    """Primal objective max_i model_i / alpha_i + ||d||^2 / 2 at a given d."""
    d = np.asarray(d, dtype=float)
    p = inp.x + d
    model = inp.grads @ d + g_vector(inp.kind, p, inp.m) - inp.g_at_x
    return float(np.max(model / inp.alphas) + 0.5 * np.dot(d, d))


def _solve_m1(ev):
    return ev.result(np.array([1.0]))


def _solve_m2(ev, cfg, warm_t=None):
    """Exact dual solve for two objectives.

    h(t) = omega((t, 1-t)) is convex on [0, 1] with h'(t) = q_2(t) - q_1(t)
    piecewise linear and nondecreasing, so a sign bracket plus secant steps
    land on the root to machine accuracy. Endpoint signs settle vertex
    solutions for free; a warm t from the previous iterate shrinks the
    bracket before any bisection happens.
    """

    def slope(t):
        lam = np.array([t, 1.0 - t])
        _p, _d, q, gap = ev.query(lam)
        return q[1] - q[0], gap

    h0, gap0 = slope(0.0)
    if h0 >= 0.0:
        return ev.result(np.array([0.0, 1.0]))
    h1, gap1 = slope(1.0)
    if h1 <= 0.0:
        return ev.result(np.array([1.0, 0.0]))

    a, ha = 0.0, h0
    b, hb = 1.0, h1
    best_t, best_gap = (0.0, gap0) if gap0 <= gap1 else (1.0, gap1)

    def note(t, h, gap):
        nonlocal a, ha, b, hb, best_t, best_gap
        if gap < best_gap:
            best_t, best_gap = t, gap
        if h < 0.0 and t > a:
            a, ha = t, h
        elif h > 0.0 and t < b:
            b, hb = t, h
        return h == 0.0

    if warm_t is not None and 0.0 < warm_t < 1.0:
        hw, gapw = slope(warm_t)
        if note(warm_t, hw, gapw):
            return ev.result(np.array([warm_t, 1.0 - warm_t]))

    def secant():
        # root of the bracketing slopes; exact when h' is linear inside
        if hb - ha > 0.0:
            t = (a * hb - b * ha) / (hb - ha)
            if a < t < b:
                return t
        return 0.5 * (a + b)

    # alternate secant and bisection probes: the secant lands on the root of
    # the current linear piece of h', the bisection guarantees the bracket
    # keeps shrinking geometrically across pieces
    use_secant = True
    while best_gap > cfg.gap_tol:
        mid = secant() if use_secant else 0.5 * (a + b)
        use_secant = not use_secant
        if mid <= a or mid >= b:
            break  # bracket at float resolution
        hm, gapm = slope(mid)
        if note(mid, hm, gapm):
            best_t = mid
            break
    return ev.result(np.array([best_t, 1.0 - best_t]))


def _segment_minimize(ev, lam, step, eta_max, slope0):
    """Exact minimization of omega along lam + eta step, eta in [0, eta_max].

    phi'(eta) = <grad omega(lam_eta), step> = -<q(lam_eta), step> is
    piecewise linear and nondecreasing (omega is convex); sign bisection
    with a secant finish locates its root.
    """

    def phi_slope(eta):
        _p, _d, q, _gap = ev.query(lam + eta * step)
        return -float(np.dot(q, step))

    ha = slope0
    if ha >= 0.0:
        return 0.0
    hb = phi_slope(eta_max)
    if hb <= 0.0:
        return eta_max
    a, b = 0.0, eta_max
    while b - a > 1e-12 * max(1.0, eta_max):
        mid = 0.5 * (a + b)
        hm = phi_slope(mid)
        if hm < 0.0:
            a, ha = mid, hm
        elif hm > 0.0:
            b, hb = mid, hm
        else:
            return mid
    if hb - ha > 0.0:
        eta = (a * hb - b * ha) / (hb - ha)
        if a < eta < b:
            return eta
    return 0.5 * (a + b)


def _dual_hessian(inp, p):
    """Hessian of omega on the smooth piece containing the prox point p.

    Every supported prox is piecewise affine, p = x + d with d affine in u
    on the active piece, so q is affine in lambda and the Hessian is a Gram
    matrix S M S^T: positive semidefinite, exact on the piece.
    """
    V = inp.scaled_grads
    kind = inp.kind
    if isinstance(kind, Zero):
        return V @ V.T
    if isinstance(kind, BoxIndicator):
        lo, hi = kind.arrays()
        free = (p > lo) & (p < hi)  # clamped coordinates do not move
        Vf = V[:, free]
        return Vf @ Vf.T
    if isinstance(kind, SimplexIndicator):
        S = p > 0.0
        Vs = V[:, S]
        k = int(S.sum())
        if k == 0:
            return np.zeros((inp.m, inp.m))
        row = Vs @ np.ones(k)
        # support coordinates move through the centered projector I - 11'/k
        return Vs @ Vs.T - np.outer(row, row) / k
    if isinstance(kind, WeightedL1):
        coeffs = np.asarray(kind.coeffs, dtype=float)
        sgn = np.sign(p)
        S = V + np.outer(coeffs / inp.alphas, sgn)
        Sf = S[:, p != 0.0]
        return Sf @ Sf.T
    return None  # unknown kind: no second-order model


def _newton_face_step(ev, lam, p, q):
    """One equality-constrained Newton step on the face spanned by lam > 0.

    Solves min 0.5 d'Hd + g'd subject to sum(d) = 0 over the active
    coordinates, caps the step at the nonnegativity boundary, and accepts it
    only when omega strictly decreases. Returns True when lam was advanced
    (in place). Conditioning-immune, which matters because the Gram matrix
    inherits the alpha imbalance squared.
    """
    inp = ev.inp
    H = _dual_hessian(inp, p)
    if H is None:
        return False
    act = np.nonzero(lam > 0.0)[0]
    k = act.size
    if k < 2:
        return False
    g = -q[act]
    K = np.zeros((k + 1, k + 1))
    K[:k, :k] = H[np.ix_(act, act)]
    K[:k, k] = 1.0
    K[k, :k] = 1.0
    rhs = np.concatenate([-g, [0.0]])
    try:
        sol, *_ = np.linalg.lstsq(K, rhs, rcond=None)
    except np.linalg.LinAlgError:
        return False
    delta = sol[:k]
    norm = float(np.linalg.norm(delta))
    if not np.isfinite(norm) or norm <= 1e-16:
        return False
    neg = delta < 0.0
    t = 1.0
    if np.any(neg):
        t = min(1.0, float(np.min(lam[act][neg] / -delta[neg])))
    if t <= 0.0:
        return False
    omega0 = ev.omega(lam, p=p)
    full = np.zeros(lam.size)
    full[act] = delta
    for _ in range(8):
        trial = lam + t * full
        np.clip(trial, 0.0, None, out=trial)
        s = trial.sum()
        if s <= 0.0:
            return False
        trial /= s
        if ev.omega(trial) < omega0 - 1e-15 * max(1.0, abs(omega0)):
            lam[:] = trial
            return True
        t *= 0.5
    return False


def frank_wolfe_solve(inp, cfg=None, counters=None, warm_lambda=None):
    """Solve the dual over the simplex; returns a DirectionResult.

    Raises DualSolveError (with the best result attached) when the iteration
    cap is reached with gap above 100x the tolerance. A warm-start lambda is
    normalized onto the simplex when given.
    """
    cfg = cfg or FWConfig()
    ev = _Evaluator(inp, counters)
    m = inp.m
    if m == 1:
        return _solve_m1(ev)
    if m == 2:
        warm_t = None
        if warm_lambda is not None:
            lam = np.asarray(warm_lambda, dtype=float)
            s = lam.sum()
            if s > 0 and np.all(lam >= 0):
                warm_t = float(lam[0] / s)
        return _solve_m2(ev, cfg, warm_t)

    if warm_lambda is not None:
        lam = np.clip(np.asarray(warm_lambda, dtype=float), 0.0, None)
        s = lam.sum()
        lam = lam / s if s > 0 else np.full(m, 1.0 / m)
    else:
        lam = np.full(m, 1.0 / m)

    best = None
    for _ in range(cfg.max_iters):
        p, _d, q, gap = ev.query(lam)
        if best is None or gap < best[1]:
            best = (lam.copy(), gap)
        if gap <= cfg.gap_tol:
            break
        if not _newton_face_step(ev, lam, p, q):
            # pairwise exchange: move mass from the flattest active
            # coordinate straight to the steepest one
            j_to = int(np.argmax(q))
            active = np.nonzero(lam > 0.0)[0]
            j_from = active[int(np.argmin(q[active]))]
            if j_to == j_from:
                break
            step = np.zeros(m)
            step[j_to] = 1.0
            step[j_from] = -1.0
            eta_max = float(lam[j_from])
            eta = _segment_minimize(
                ev, lam, step, eta_max, -(float(q[j_to]) - float(q[j_from]))
            )
            if eta <= 0.0:
                break
            lam += eta * step
            if eta >= eta_max * (1.0 - 1e-12):
                lam[j_from] = 0.0
        np.clip(lam, 0.0, None, out=lam)
        lam /= lam.sum()
    lam, gap = best
    res = ev.result(lam)
    if res.fw_gap > 100.0 * cfg.gap_tol:
        raise DualSolveError(
            f"dual gap {res.fw_gap:.3e} above 100x tolerance after "
            f"{cfg.max_iters} iterations",
            result=res,
        )
    return res
