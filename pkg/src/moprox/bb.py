"""Per-objective Barzilai-Borwein stepsize scalars.

Given the displacement s = x_k - x_{k-1} and per-objective gradient changes
y_i = grad f_i(x_k) - grad f_i(x_{k-1}), each objective gets its own inverse
stepsize alpha_i:

* <s, y_i> > 0  : alpha_i = clamp(<s, y_i> / <s, s>)      (secant curvature)
* <s, y_i> < 0  : alpha_i = clamp(||y_i|| / ||s||)        (magnitude fallback)
* <s, y_i> ~ 0  : alpha_i = alpha_min                      (flat objective)

where clamp(.) projects onto [alpha_min, alpha_max]. The zero test is
relative: |<s, y_i>| <= 1e-14 ||s|| ||y_i||, so it is scale invariant and
catches exactly-linear objectives (y_i = 0).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DegenerateStepError

_ZERO_CURVATURE_REL = 1e-14


@dataclass(frozen=True)
class BBConfig:
    alpha_min: float = 1e-3
    alpha_max: float = 1e3

    def __post_init__(self):
        if not (0.0 < self.alpha_min <= self.alpha_max):
            raise ValueError("need 0 < alpha_min <= alpha_max")


@dataclass
class BBMemory:
    """Previous iterate and its Jacobian, as needed by the secant rule."""

    x: np.ndarray
    grads: np.ndarray

    def update(self, x, grads):
        self.x = x
        self.grads = grads


def bb_stepsizes(memory, x, grads, config):
    """(m,) array of alpha_i from the secant pair against ``memory``.

    Raises DegenerateStepError when the displacement is identically zero.
    """
    s = np.asarray(x, dtype=float) - memory.x
    ss = float(np.dot(s, s))
    if ss == 0.0:
        raise DegenerateStepError("consecutive iterates coincide; no secant pair")
    s_norm = np.sqrt(ss)
    Y = np.asarray(grads, dtype=float) - memory.grads
    sy = Y @ s
    y_norms = np.sqrt(np.einsum("ij,ij->i", Y, Y))

    alphas = np.empty(sy.size)
    near_zero = np.abs(sy) <= _ZERO_CURVATURE_REL * s_norm * y_norms
    positive = (sy > 0.0) & ~near_zero
    negative = (sy < 0.0) & ~near_zero
    alphas[near_zero] = config.alpha_min
    alphas[positive] = np.clip(sy[positive] / ss, config.alpha_min, config.alpha_max)
    alphas[negative] = np.clip(
        y_norms[negative] / s_norm, config.alpha_min, config.alpha_max
    )
    return alphas
