"""Constants of the Hardy, interpolation and subcritical inequalities."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .params import DomainError, INTERPOLATION, SUBCRITICAL, sobolev_conjugate
from .quad import surface_area

CLOSED_FORM = "closed-form"
USER_SUPPLIED = "user-supplied"
EMPIRICAL = "empirical-lower-bound"
OMEGA_FREE = "omega-free"

# weakest provenance wins when constants are combined
_RANK = {CLOSED_FORM: 0, OMEGA_FREE: 1, USER_SUPPLIED: 2, EMPIRICAL: 3}


def weakest(*tags: str) -> str:
    return max(tags, key=_RANK.__getitem__)


@dataclass(frozen=True)
class ConstantBundle:
    c_hardy: float
    c_sobolev: Optional[float]
    sobolev_tag: Optional[str]
    c_composed: float
    composed_tag: str
    regime: str

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def hardy_constant_exact(n: int, p, alpha) -> Fraction:
    p, alpha = Fraction(p), Fraction(alpha)
    den = n + (alpha - 1) * p
    if den <= 0:
        raise DomainError(f"Hardy constant undefined: n + (alpha-1)p = {den} <= 0")
    return p / den


def hardy_constant(n: int, p, alpha) -> float:
    """C_H = p / (n + (alpha-1) p) for the norm form of the weighted Hardy inequality.

    Follows from integrating div(x |x|^{-k}) = (n-k)|x|^{-k} against |u|^p
    with k = (1-alpha) p, then Hoelder.  Its p-th power is the constant of
    the integral form.
    """
    return float(hardy_constant_exact(n, p, alpha))


def interpolation_exponents(c, p, s, p_star) -> tuple[Fraction, Fraction]:
    c, p, s, p_star = map(Fraction, (c, p, s, p_star))
    if not 0 <= c <= 1:
        raise DomainError("c must lie in [0, 1]")
    if s != (1 - c) * p + c * p_star:
        raise DomainError("exponent closure violated: s != (1-c)p + c p*")
    return (1 - c) * p / s, c * p_star / s


def interpolation_constant(cH: float, cS: float, c, p, s, p_star) -> float:
    """C_H^((1-c)p/s) * C_S^(c p*/s)."""
    if not (cH > 0 and cS > 0):
        raise ValueError("constants must be positive")
    eh, es = interpolation_exponents(c, p, s, p_star)
    return cH ** float(eh) * cS ** float(es)


def subcritical_constant(cH: float, n: int, kappa, r0: float, R: float,
                         omega_factor: bool = True) -> float:
    """C_H (omega_{n-1} ln(R/r0))^kappa.

    With ``omega_factor=False`` the sphere area is dropped, which is the
    literal expression C_H (ln R/r0)^kappa.  That version is not a valid
    bound in general.
    """
    if not 0 < r0 < R:
        raise DomainError("empty support annulus: need 0 < r0 < R")
    kappa = Fraction(kappa)
    if kappa <= 0:
        raise DomainError("kappa must be positive")
    log_factor = math.log(R / r0)
    if omega_factor:
        log_factor *= surface_area(n)
    return cH * log_factor ** float(kappa)


def sobolev_constant_bound(n: int, p, alpha, source=None, family: str = "gaussian-times-cutoff",
                           budget: int = 60, seed: int = 0, extra_trials=(), cfg=None):
    """Return (C_S, tag).

    A number passed as ``source`` is returned as user-supplied.  Otherwise
    the weighted Sobolev ratio is maximised over ``family`` (and any
    ``extra_trials``); the result is only a lower bound on the sharp
    constant and is tagged accordingly.
    """
    p, alpha = Fraction(p), Fraction(alpha)
    p_star = sobolev_conjugate(n, p)
    if alpha * p <= -n or alpha * p_star <= -n:
        raise DomainError("weighted Sobolev inequality needs alpha p > -n and alpha p* > -n")
    if source is not None and source != "empirical":
        value = float(source)
        if not (value > 0 and math.isfinite(value)):
            raise ValueError("user-supplied Sobolev constant must be positive and finite")
        return value, USER_SUPPLIED
    from .search import estimate_ratio
    from .verify import ui_ratio

    est = estimate_ratio(n, p, alpha, alpha, family, budget=budget, seed=seed, cfg=cfg)
    best = est.best_ratio
    for f in extra_trials:
        best = max(best, ui_ratio(n, p, alpha, alpha, f, cfg)[0])
    return best, EMPIRICAL


def compose_constants(n: int, p, alpha, sigma, c_sobolev=None, support=None,
                      omega_factor: bool = True, sobolev_tag: str = USER_SUPPLIED) -> ConstantBundle:
    """Constant of the simplified inequality in the regime fixed by sigma.

    ``c_sobolev`` is needed only in the interpolation regime with c > 0;
    ``support`` (r0, R) only in the subcritical regime.
    """
    from .params import interpolation_weights, kappa_of, s_of

    p, alpha, sigma = map(Fraction, (p, alpha, sigma))
    s = s_of(n, p, alpha, sigma)
    cH = hardy_constant(n, p, alpha)
    if s < p:
        if support is None:
            raise DomainError("subcritical constant needs the support radii")
        value = subcritical_constant(cH, n, kappa_of(s, p), support[0], support[1], omega_factor)
        tag = CLOSED_FORM if omega_factor else OMEGA_FREE
        return ConstantBundle(cH, None, None, value, tag, SUBCRITICAL)
    if s == p:
        return ConstantBundle(cH, None, None, cH, CLOSED_FORM, INTERPOLATION)
    _, c = interpolation_weights(n, p, alpha, sigma)
    if c_sobolev is None:
        raise DomainError("interpolation constant with c > 0 needs a Sobolev constant")
    value = interpolation_constant(cH, c_sobolev, c, p, s, sobolev_conjugate(n, p))
    return ConstantBundle(cH, float(c_sobolev), sobolev_tag, value,
                          weakest(CLOSED_FORM, sobolev_tag), INTERPOLATION)
