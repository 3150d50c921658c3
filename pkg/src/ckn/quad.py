"""Weighted radial quadrature.

Integrals of radial functions over R^n reduce to

    omega_{n-1} * int_{r0}^{R} t^(n-1+w) |g(t)|^e dt

with ``omega_{n-1}`` the area of the unit sphere.  Annular supports are
integrated in the logarithmic variable y = ln t; supports touching the
origin use t = u^m so that an integrable power singularity at 0 becomes a
smooth endpoint.  Integrands are always evaluated in log-space to keep
t^(n+w) |g|^e finite over very wide annuli.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .trials import TrialFunction

# 21-point Kronrod extension of the 10-point Gauss-Legendre rule.
_XGK = np.array([
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077208980534223,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
])
_WG = np.array([
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
])

NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
# Gauss nodes are the odd-indexed Kronrod nodes 1, 3, ..., 9 of _XGK.
GAUSS_WEIGHTS = np.zeros(21)
GAUSS_WEIGHTS[[1, 3, 5, 7, 9]] = _WG
GAUSS_WEIGHTS[[19, 17, 15, 13, 11]] = _WG


@dataclass(frozen=True)
class QuadConfig:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    max_subdivisions: int = 4000
    # None picks the smallest integer m with m*(n+w) - 1 >= 1
    substitution_power: Optional[int] = None

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("quadrature tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")
        if self.substitution_power is not None and self.substitution_power < 1:
            raise ValueError("substitution power must be >= 1")


DEFAULT_CONFIG = QuadConfig()


@dataclass(frozen=True)
class IntegralResult:
    value: float
    error_estimate: float
    converged: bool

    @property
    def rel_error(self) -> float:
        if self.value == 0.0:
            return 0.0 if self.error_estimate == 0.0 else math.inf
        return self.error_estimate / abs(self.value)

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "error_estimate": self.error_estimate,
            "converged": self.converged,
        }


def adaptive_gk21(
    func: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    breakpoints: Sequence[float] = (),
    rel_tol: float = 1e-10,
    abs_tol: float = 1e-14,
    limit: int = 4000,
) -> IntegralResult:
    """Globally adaptive Gauss-Kronrod (10/21) quadrature of a vectorised ``func``.

    Every pass evaluates all pending panels in a single call.  The error
    of a panel is the raw |K21 - G10| difference, which overestimates the
    error of the Kronrod value for smooth integrands.
    """
    if b < a:
        res = adaptive_gk21(func, b, a, breakpoints, rel_tol, abs_tol, limit)
        return IntegralResult(-res.value, res.error_estimate, res.converged)
    edges = sorted({a, b, *(x for x in breakpoints if a < x < b)})
    lo = np.array(edges[:-1], dtype=float)
    hi = np.array(edges[1:], dtype=float)
    lo, hi = lo[hi > lo], hi[hi > lo]
    if lo.size == 0:
        return IntegralResult(0.0, 0.0, True)

    def panels(lo, hi):
        half = 0.5 * (hi - lo)
        mid = 0.5 * (hi + lo)
        x = mid[:, None] + half[:, None] * NODES[None, :]
        fx = np.asarray(func(x.ravel()), dtype=float).reshape(x.shape)
        k = half * (fx @ KRONROD_WEIGHTS)
        g = half * (fx @ GAUSS_WEIGHTS)
        return k, np.abs(k - g)

    vals, errs = panels(lo, hi)
    converged = False
    while True:
        total = float(vals.sum())
        err = float(errs.sum())
        tol = max(abs_tol, rel_tol * abs(total))
        if not np.isfinite(total) or not np.isfinite(err):
            break
        if err <= tol:
            converged = True
            break
        if lo.size >= limit:
            break
        # bisect every panel holding more than its share of the budget
        share = tol * (hi - lo) / (hi[-1] - lo[0]) if lo.size > 1 else np.zeros(1)
        split = errs > share
        split[np.argmax(errs)] = True
        room = limit - lo.size
        idx = np.flatnonzero(split)
        if idx.size > room:
            idx = idx[np.argsort(errs[idx])[::-1][:room]]
            split = np.zeros_like(split)
            split[idx] = True
        mids = 0.5 * (lo[split] + hi[split])
        new_lo = np.concatenate([lo[split], mids])
        new_hi = np.concatenate([mids, hi[split]])
        # panels too narrow to bisect cannot improve further
        if np.any(new_hi - new_lo <= 4 * np.finfo(float).eps * np.maximum(np.abs(new_lo), 1e-300)):
            break
        nv, ne = panels(new_lo, new_hi)
        keep = ~split
        lo = np.concatenate([lo[keep], new_lo])
        hi = np.concatenate([hi[keep], new_hi])
        vals = np.concatenate([vals[keep], nv])
        errs = np.concatenate([errs[keep], ne])
        order = np.argsort(lo)
        lo, hi, vals, errs = lo[order], hi[order], vals[order], errs[order]
    return IntegralResult(float(vals.sum()), float(errs.sum()), converged)


def surface_area(n: int) -> float:
    """Area of the unit sphere in R^n, 2 pi^(n/2) / Gamma(n/2)."""
    if n < 2:
        raise ValueError(f"radial reduction needs n >= 2, got n={n}")
    return 2.0 * math.pi ** (n / 2) / math.gamma(n / 2)


def substitution_power(n: int, w: float) -> int:
    lam1 = n + w  # exponent of t^(n-1+w), plus one
    return max(1, math.ceil(2.0 / lam1 - 1e-12))


def _log_abs(g: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.log(np.abs(g))


def radial_integral(
    profile: Callable[[np.ndarray], np.ndarray],
    support: tuple[float, float],
    w: float,
    e: float,
    n: int,
    cfg: QuadConfig = DEFAULT_CONFIG,
    breakpoints: Sequence[float] = (),
    rel_tol: Optional[float] = None,
) -> IntegralResult:
    """omega_{n-1} * int t^(n-1+w) |profile(t)|^e dt over ``support``."""
    r0, R = support
    w, e = float(w), float(e)
    if e <= 0:
        raise ValueError("exponent e must be positive")
    if R <= r0:
        return IntegralResult(0.0, 0.0, True)
    omega = surface_area(n)
    rel = cfg.rel_tol if rel_tol is None else rel_tol
    if r0 > 0:
        def log_integrand(y):
            return (n + w) * y + e * _log_abs(profile(np.exp(y)))

        a, b = math.log(r0), math.log(R)
        points = [math.log(x) for x in breakpoints if r0 < x < R]
    else:
        if n + w <= 0:
            raise ValueError(
                f"non-integrable weight at origin: n + w = {n + w} <= 0"
            )
        m = cfg.substitution_power or substitution_power(n, w)

        def log_integrand(u):
            lu = np.log(u)
            return math.log(m) + (m - 1) * lu + (n - 1 + w) * m * lu + e * _log_abs(profile(u ** m))

        a, b = 0.0, R ** (1.0 / m)
        points = [x ** (1.0 / m) for x in breakpoints if 0 < x < R]

    # factor out the peak so abs_tol is relative to the integrand's own scale
    with np.errstate(divide="ignore", invalid="ignore"):
        probe = log_integrand(np.linspace(a, b, 258)[1:-1])
    finite = probe[np.isfinite(probe)]
    shift = float(finite.max()) if finite.size else 0.0

    def integrand(x):
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.exp(log_integrand(x) - shift)

    res = adaptive_gk21(integrand, a, b, points, rel, cfg.abs_tol / omega, cfg.max_subdivisions)
    scale = omega * math.exp(shift)
    return IntegralResult(scale * res.value, scale * res.error_estimate, res.converged)


def _norm_from_integral(res: IntegralResult, e: float, cfg: QuadConfig) -> IntegralResult:
    v = res.value ** (1.0 / e) if res.value > 0 else 0.0
    if res.value > 0:
        err = v * res.error_estimate / (e * res.value)
    else:
        err = res.error_estimate ** (1.0 / e) if res.error_estimate > 0 else 0.0
    ok = res.converged and err <= max(cfg.rel_tol * abs(v), cfg.abs_tol)
    return IntegralResult(v, err, ok)


def weighted_integral(f: TrialFunction, w, e, n: int, cfg: QuadConfig = DEFAULT_CONFIG,
                      derivative: bool = False) -> IntegralResult:
    """omega_{n-1} * int t^(n-1+w) |f(t)|^e dt (no outer root)."""
    e = float(e)
    if n + float(w) <= 0 and f.support[0] == 0:
        raise ValueError(f"non-integrable weight at origin: n + w = {n + float(w)} <= 0")
    if f.amplitude == 0:
        return IntegralResult(0.0, 0.0, True)
    profile = f.radial_derivative if derivative else f.value
    # the root 1/e magnifies relative error by 1/e
    rel = cfg.rel_tol * min(1.0, e)
    return radial_integral(profile, f.support, w, e, n, cfg, f.breakpoints(), rel)


def weighted_norm(f: TrialFunction, w, e, n: int, cfg: QuadConfig = DEFAULT_CONFIG) -> IntegralResult:
    """(omega_{n-1} int t^(n-1+w) |f|^e dt)^(1/e)."""
    e = float(e)
    return _norm_from_integral(weighted_integral(f, w, e, n, cfg), e, cfg)


def weighted_gradient_norm(f: TrialFunction, w, p, n: int, cfg: QuadConfig = DEFAULT_CONFIG) -> IntegralResult:
    """(omega_{n-1} int t^(n-1+w) |f'|^p dt)^(1/p); |grad u| = |f'| for radial u."""
    p = float(p)
    return _norm_from_integral(weighted_integral(f, w, p, n, cfg, derivative=True), p, cfg)


def annulus_weight_integral(n: int, w, r0: float, R: float) -> float:
    """Closed form of the integral of |x|^w over r0 < |x| < R."""
    if r0 >= R:
        raise ValueError("empty support annulus: r0 >= R")
    w = float(w)
    omega = surface_area(n)
    if n + w == 0:
        if r0 <= 0:
            raise ValueError("|x|^-n is not integrable at the origin")
        return omega * math.log(R / r0)
    if r0 == 0 and n + w < 0:
        raise ValueError("non-integrable weight at origin")
    return omega * (R ** (n + w) - r0 ** (n + w)) / (n + w)
