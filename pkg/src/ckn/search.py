"""Derivative-free lower bounds on optimal constants.

The ratio lhs/rhs of the simplified inequality is maximised over the
shape parameters of a trial family by coordinate search with halving
steps, restarted from seeded random points.  Because s is balanced the
ratio is dilation invariant, so the outer radius is fixed and only the
shape varies.

The candidate sequence does not depend on the budget: a larger budget
only extends it, so the best ratio is nondecreasing in the budget.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from .params import DomainError
from .quad import QuadConfig
from .trials import ANNULAR_BUMP, GAUSSIAN_CUTOFF, SMOOTH_BUMP, TRUNCATED_POWER, TrialFunction

STEP_DECAY = 0.5
N_DECAYS = 8


@dataclass(frozen=True)
class SearchSpace:
    lower: tuple
    upper: tuple
    start: tuple
    build: Callable[[np.ndarray], TrialFunction]


def critical_power(n: int, p, alpha) -> float:
    """Exponent -(n + (alpha-1)p)/p at which both sides diverge logarithmically."""
    return -float(n + (Fraction(alpha) - 1) * Fraction(p)) / float(p)


def search_space(family: str, n: int, p, alpha) -> SearchSpace:
    if family == SMOOTH_BUMP:
        # x = inner radius / outer radius; 0 gives the centred bump
        return SearchSpace((0.0,), (0.95,), (0.0,),
                           lambda x: TrialFunction(SMOOTH_BUMP, (), float(x[0]), 1.0))
    if family == ANNULAR_BUMP:
        return SearchSpace((0.0, 0.05), (0.9, 0.5), (0.5, 0.25),
                           lambda x: TrialFunction(ANNULAR_BUMP, (float(x[1]),), float(x[0]), 1.0))
    if family == TRUNCATED_POWER:
        lam = critical_power(n, p, alpha)

        def build(x):
            eps, span, ramp = map(float, x)
            return TrialFunction(TRUNCATED_POWER, (lam + eps, ramp),
                                 math.exp(-span / 2), math.exp(span / 2))

        # x = (eps, ln(R/r0), ramp fraction in log-radius)
        return SearchSpace((-0.5, 1.0, 0.02), (0.5, 40.0, 0.5), (0.1, 10.0, 0.25), build)
    if family == GAUSSIAN_CUTOFF:
        # x = outer radius in units of the Gaussian width
        return SearchSpace((1.5,), (8.0,), (4.0,),
                           lambda x: TrialFunction(GAUSSIAN_CUTOFF, (1.0, 0.1), 0.0, float(x[0])))
    raise DomainError(f"family {family!r} cannot be searched")


@dataclass(frozen=True)
class RatioEstimate:
    best_ratio: float
    best_parameters: tuple
    evaluations: int
    seed: int
    family: str = ""

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "best_ratio": self.best_ratio,
            "best_parameters": list(self.best_parameters),
            "evaluations": self.evaluations,
            "seed": self.seed,
        }


class _Budget(Exception):
    pass


def coordinate_search(objective, lower, upper, start, budget: int, seed: int):
    """Maximise ``objective`` on a box; returns (best value, best x, evaluations)."""
    lower, upper = np.asarray(lower, float), np.asarray(upper, float)
    rng = np.random.default_rng(seed)
    best = [-math.inf, np.asarray(start, float), 0]

    def evaluate(x):
        if best[2] >= budget:
            raise _Budget
        best[2] += 1
        try:
            v = float(objective(x))
        except (DomainError, ValueError, FloatingPointError):
            v = -math.inf
        if not math.isfinite(v):
            v = -math.inf
        if v > best[0]:
            best[0], best[1] = v, x.copy()
        return v

    x = np.clip(np.asarray(start, float), lower, upper)
    try:
        while True:
            fx = evaluate(x)
            step = (upper - lower) / 4.0
            for _ in range(N_DECAYS + 1):
                improved = True
                while improved:
                    improved = False
                    for i in range(x.size):
                        for sign in (1.0, -1.0):
                            cand = x.copy()
                            cand[i] = min(max(cand[i] + sign * step[i], lower[i]), upper[i])
                            if cand[i] == x[i]:
                                continue
                            fc = evaluate(cand)
                            if fc > fx:
                                x, fx, improved = cand, fc, True
                                break
                step = step * STEP_DECAY
            x = lower + rng.random(x.size) * (upper - lower)
    except _Budget:
        pass
    return best[0], best[1], best[2]


def estimate_ratio(n: int, p, alpha, sigma, family: str, budget: int = 100, seed: int = 0,
                   cfg: Optional[QuadConfig] = None) -> RatioEstimate:
    """Best lhs/rhs ratio of the simplified inequality over ``family``.

    This is a lower bound on the optimal constant, up to quadrature error.
    """
    from .verify import check_admissible, ui_ratio

    if budget < 1:
        raise ValueError("budget must be >= 1")
    s = check_admissible(n, p, alpha, sigma)
    space = search_space(family, n, p, alpha)

    def objective(x):
        return ui_ratio(n, p, alpha, sigma, space.build(x), cfg, s)[0]

    value, x, evals = coordinate_search(objective, space.lower, space.upper, space.start, budget, seed)
    return RatioEstimate(value, tuple(float(v) for v in x), evals, seed, family)
