"""Random generators shared by the property and acceptance tests."""
from fractions import Fraction

import numpy as np

from ckn.params import DomainError, ParamTuple, s_of, tuple_from_simplified, validate
from ckn.trials import TrialFunction


def _frac(rng, lo, hi, den):
    """Uniform rational on a grid of step 1/den inside [lo, hi]."""
    k_lo = int(np.ceil(lo * den))
    k_hi = int(np.floor(hi * den))
    return Fraction(int(rng.integers(k_lo, k_hi + 1)), den)


def random_valid_tuple(rng, interp=False, a_positive=True, margin=Fraction(0)) -> ParamTuple:
    """A balanced tuple passing validate.

    ``interp`` forces p < n and sigma in [alpha-1, alpha].  ``margin``
    keeps every weight exponent at least that far above -n, which keeps
    the origin singularities mild for quadrature.
    """
    while True:
        n = int(rng.integers(2, 7))
        p = _frac(rng, 1, 4, 2)
        if interp and p >= n:
            continue
        alpha = 1 - Fraction(n) / p + _frac(rng, Fraction(1, 8), 3, 8)
        if interp:
            sigma = alpha - 1 + _frac(rng, 0, 1, 8)
        else:
            sigma = alpha - _frac(rng, 0, 3, 8)
        a = _frac(rng, Fraction(1, 8) if a_positive else 0, 1, 8)
        q = _frac(rng, 1, 4, 2)
        beta = -Fraction(n) / q + _frac(rng, Fraction(1, 8), 3, 8)
        try:
            t = tuple_from_simplified(n, p, q, alpha, beta, sigma, a)
        except (DomainError, ZeroDivisionError):
            continue
        if not validate(t).valid:
            continue
        if margin:
            s = s_of(n, p, alpha, sigma)
            exps = [t.gamma * t.r, sigma * s, t.beta * t.q, (alpha - 1) * p, alpha * p]
            if p < n:
                exps.append(alpha * n * p / (n - p))
            if min(e + n for e in exps) < margin:
                continue
        return t


def random_admissible(rng, sigma_mode="any", margin=Fraction(1, 4)):
    """(n, p, alpha, sigma) admissible for the simplified inequality.

    sigma_mode: "any" (sigma <= alpha), "hardy" (sigma = alpha-1) or
    "interp" (sigma in [alpha-1, alpha], p < n).
    """
    while True:
        n = int(rng.integers(2, 7))
        p = _frac(rng, 1, 4, 2)
        if sigma_mode == "interp" and p >= n:
            continue
        alpha = 1 - Fraction(n) / p + _frac(rng, Fraction(1, 8), 3, 8)
        if sigma_mode == "hardy":
            sigma = alpha - 1
        elif sigma_mode == "interp":
            sigma = alpha - 1 + _frac(rng, 0, 1, 8)
        else:
            sigma = alpha - _frac(rng, 0, 3, 8)
        try:
            s = s_of(n, p, alpha, sigma)
        except DomainError:
            continue
        if n / s < Fraction(1, 8):
            continue
        if min(n + sigma * s, n + alpha * p, n + (alpha - 1) * p) < margin:
            continue
        return n, p, alpha, sigma


def random_bump(rng, annular=None) -> TrialFunction:
    """A smooth compactly supported trial from the bump-like families."""
    R = float(rng.uniform(0.5, 3.0))
    if annular is None:
        annular = bool(rng.random() < 0.5)
    r0 = float(rng.uniform(0.05, 0.8)) * R if annular else 0.0
    kind = int(rng.integers(0, 3))
    if kind == 0:
        return TrialFunction("smooth-bump", (), r0, R)
    if kind == 1:
        return TrialFunction("annular-bump", (float(rng.uniform(0.05, 0.5)),), r0, R)
    return TrialFunction("gaussian-times-cutoff", (float(rng.uniform(0.2, 2.0)) * R, float(rng.uniform(0.05, 0.5))), r0, R)


def random_trial(rng, n, p, alpha) -> TrialFunction:
    """Any differentiable family, including truncated powers near the critical exponent."""
    if rng.random() < 0.3:
        lam = -float(n + (alpha - 1) * p) / float(p)
        span = float(rng.uniform(0.5, 30.0))
        r0 = float(np.exp(rng.uniform(-3, 1)))
        return TrialFunction("truncated-power", (lam + float(rng.uniform(-0.5, 0.5)), float(rng.uniform(0.02, 0.5))),
                             r0, r0 * float(np.exp(span)))
    return random_bump(rng)
