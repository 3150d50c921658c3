"""Exact-rational CKN parameter engine.

Every quantity here is a :class:`fractions.Fraction`.  The dimensional
balance is an exact linear constraint, so nothing in this module ever
compares against a floating tolerance.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Optional, Union

RationalLike = Union[int, Fraction, str]

SOBOLEV = "Sobolev"
HARDY = "Hardy"
GAGLIARDO_NIRENBERG = "GagliardoNirenberg"
NASH = "Nash"

SUBCRITICAL = "Subcritical"
INTERPOLATION = "Interpolation"


class DomainError(ValueError):
    """A derived quantity is undefined for the given parameters."""


def as_rational(value, name: str = "value") -> Fraction:
    """Coerce ``value`` to an exact Fraction.

    Integers, Fractions and strings such as ``"3/4"`` or ``"-2"`` are
    accepted.  Floats are refused because they are not exact.
    """
    if isinstance(value, bool):
        raise TypeError(f"{name}: booleans are not rationals")
    if isinstance(value, Rational):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"{name}: malformed rational {value!r}") from exc
    raise TypeError(
        f"{name}: expected an integer or a 'num/den' string, got {type(value).__name__}"
    )


@dataclass(frozen=True)
class ParamTuple:
    """The parameter vector (n, p, q, r, alpha, beta, gamma, a)."""

    n: int
    p: Fraction
    q: Fraction
    r: Fraction
    alpha: Fraction
    beta: Fraction
    gamma: Fraction
    a: Fraction

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, int):
            n = as_rational(self.n, "n")
            if n.denominator != 1:
                raise ValueError(f"n: dimension must be an integer, got {n}")
            object.__setattr__(self, "n", int(n))
        if self.n < 1:
            raise ValueError(f"n: dimension must be >= 1, got {self.n}")
        for name in ("p", "q", "r", "alpha", "beta", "gamma", "a"):
            object.__setattr__(self, name, as_rational(getattr(self, name), name))

    def to_dict(self) -> dict:
        out = {"n": self.n}
        for name in ("p", "q", "r", "alpha", "beta", "gamma", "a"):
            out[name] = fraction_str(getattr(self, name))
        return out


def fraction_str(x: Fraction) -> str:
    return str(x)


@dataclass(frozen=True)
class DerivedParams:
    sigma: Optional[Fraction]
    s: Optional[Fraction]
    b: Optional[Fraction]
    theta: Optional[Fraction]
    c: Optional[Fraction]
    kappa: Optional[Fraction]
    p_star: Optional[Fraction]

    def to_dict(self) -> dict:
        return {
            k: (None if v is None else fraction_str(v))
            for k, v in self.__dict__.items()
        }


@dataclass(frozen=True)
class Violation:
    condition: str
    message: str
    value: Fraction

    def to_dict(self) -> dict:
        return {
            "condition": self.condition,
            "message": self.message,
            "value": fraction_str(self.value),
        }


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    violations: tuple
    balance_residual: Fraction
    special_case: Optional[str] = None
    regime: Optional[str] = None
    warnings: tuple = field(default=())

    def to_dict(self) -> dict:
        return {
            "valid": self.valid,
            "violations": [v.to_dict() for v in self.violations],
            "warnings": [w.to_dict() for w in self.warnings],
            "balance_residual": fraction_str(self.balance_residual),
            "special_case": self.special_case,
            "regime": self.regime,
        }


# ---------------------------------------------------------------------------
# scalar derivations


def sobolev_conjugate(n: int, p) -> Fraction:
    p = Fraction(p)
    if p >= n:
        raise DomainError(f"Sobolev conjugate undefined: p={p} >= n={n}")
    return n * p / (n - p)


def sigma_from(t: ParamTuple) -> Fraction:
    """Solve gamma = a*sigma + (1-a)*beta for sigma."""
    if t.a == 0:
        raise DomainError("sigma undefined at a=0")
    return (t.gamma - (1 - t.a) * t.beta) / t.a


def s_of(n: int, p, alpha, sigma) -> Fraction:
    """The key exponent s = n p / (n - p (sigma - alpha + 1))."""
    p, alpha, sigma = Fraction(p), Fraction(alpha), Fraction(sigma)
    den = n - p * (sigma - alpha + 1)
    if den <= 0:
        raise DomainError(
            f"s undefined: violates n > p(sigma-(alpha-1)) (denominator {den})"
        )
    return n * p / den


def balance_residual(t: ParamTuple) -> Fraction:
    n = t.n
    lhs = 1 / t.r + t.gamma / n if t.r != 0 else None
    if lhs is None:
        raise DomainError("balance residual undefined at r=0")
    return (
        lhs
        - t.a * (1 / t.p + (t.alpha - 1) / n)
        - (1 - t.a) * (1 / t.q + t.beta / n)
    )


def b_of(a, q, s) -> Fraction:
    a, q, s = Fraction(a), Fraction(q), Fraction(s)
    return a * q / (a * q + (1 - a) * s)


def r_of(b, q, s) -> Fraction:
    b, q, s = Fraction(b), Fraction(q), Fraction(s)
    return (1 - b) * q + b * s


def interpolation_weights(n: int, p, alpha, sigma) -> tuple[Fraction, Fraction]:
    """Return (theta, c) with sigma = (1-theta)(alpha-1) + theta*alpha.

    ``c`` is the weight for which s = (1-c) p + c p*.
    """
    p, alpha, sigma = Fraction(p), Fraction(alpha), Fraction(sigma)
    if p >= n:
        raise DomainError(f"interpolation weights need p < n (p={p}, n={n})")
    if not alpha - 1 <= sigma <= alpha:
        raise DomainError("interpolation weights undefined outside [alpha-1, alpha]")
    theta = sigma - alpha + 1
    c = theta * (n - p) / (n - theta * p)
    return theta, c


def kappa_of(s, p) -> Fraction:
    s, p = Fraction(s), Fraction(p)
    if not 0 < s < p:
        raise DomainError("kappa defined only in subcritical regime (0 < s < p)")
    return 1 / s - 1 / p


def regime_of(s: Fraction, p: Fraction, n: int) -> str:
    # p* is +infinity when p >= n
    if s < p:
        return SUBCRITICAL
    if p < n and s > sobolev_conjugate(n, p):
        raise DomainError(f"s={s} exceeds p*; sigma > alpha")
    return INTERPOLATION


def derive(t: ParamTuple) -> DerivedParams:
    """Every derived exponent that is defined for ``t``; the rest are None."""
    p_star = sobolev_conjugate(t.n, t.p) if t.p < t.n else None
    if t.a == 0:
        return DerivedParams(None, None, None, None, None, None, p_star)
    sigma = sigma_from(t)
    try:
        s = s_of(t.n, t.p, t.alpha, sigma)
    except DomainError:
        return DerivedParams(sigma, None, None, None, None, None, p_star)
    b = b_of(t.a, t.q, s)
    theta = c = None
    if p_star is not None and t.alpha - 1 <= sigma <= t.alpha:
        theta, c = interpolation_weights(t.n, t.p, t.alpha, sigma)
    kappa = kappa_of(s, t.p) if s < t.p else None
    return DerivedParams(sigma, s, b, theta, c, kappa, p_star)


# ---------------------------------------------------------------------------
# validation


def validate(t: ParamTuple) -> ValidationReport:
    n = t.n
    bad: list[Violation] = []
    warn: list[Violation] = []

    def need(ok, cond, msg, value):
        if not ok:
            bad.append(Violation(cond, msg, Fraction(value)))

    need(t.p >= 1, "p>=1", "p must be at least 1", t.p)
    need(t.q >= 1, "q>=1", "q must be at least 1", t.q)
    need(t.r > 0, "r>0", "r must be positive", t.r)
    need(0 <= t.a <= 1, "0<=a<=1", "a must lie in [0, 1]", t.a)
    need(t.gamma * t.r > -n, "gamma*r>-n", f"gamma*r must exceed -n={-n}", t.gamma * t.r)
    need(t.alpha * t.p > -n, "alpha*p>-n", f"alpha*p must exceed -n={-n}", t.alpha * t.p)
    need(t.beta * t.q > -n, "beta*q>-n", f"beta*q must exceed -n={-n}", t.beta * t.q)

    ap1 = (t.alpha - 1) * t.p
    need(ap1 > -n, "(alpha-1)*p>-n", f"(alpha-1)*p must exceed -n={-n}", ap1)
    if t.p < n:
        aps = t.alpha * sobolev_conjugate(n, t.p)
        need(aps > -n, "alpha*p*>-n", f"alpha*p* must exceed -n={-n}", aps)

    if t.r > 0:
        residual = balance_residual(t)
        need(residual == 0, "balance", "dimensional balance does not hold", residual)
    else:
        residual = Fraction(0)

    if t.a > 0 and 0 <= t.a <= 1:
        sigma = sigma_from(t)
        need(sigma <= t.alpha, "sigma<=alpha", "sigma must not exceed alpha when a>0", sigma)
        critical = 1 / t.p + (t.alpha - 1) / n == (1 / t.r + t.gamma / n if t.r else None)
        if critical and sigma < t.alpha - 1:
            warn.append(Violation(
                "sigma>=alpha-1",
                "critical case 1/p+(alpha-1)/n = 1/r+gamma/n needs sigma >= alpha-1",
                sigma,
            ))
        den = n - t.p * (sigma - t.alpha + 1)
        need(den > 0, "np", "n > p(sigma-(alpha-1)) fails, s undefined", den)
        if den > 0:
            s = n * t.p / den
            need(s * sigma > -n, "s*sigma>-n", f"s*sigma must exceed -n={-n}", s * sigma)

    return ValidationReport(
        valid=not bad,
        violations=tuple(bad),
        balance_residual=residual,
        special_case=special_case_of(t) if not bad else None,
        warnings=tuple(warn),
    )


def special_case_of(t: ParamTuple) -> Optional[str]:
    if t.a == 1 and t.gamma == t.alpha:
        return SOBOLEV
    if t.a == 1 and t.gamma == t.alpha - 1:
        return HARDY
    if t.a == 0:
        return None
    sigma = sigma_from(t)
    if t.alpha == 0 and t.beta == 0 and sigma == 0:
        if t.p == 2 and t.q == 1 and t.a == Fraction(2) / (2 + Fraction(4, t.n)):
            return NASH
        return GAGLIARDO_NIRENBERG
    return None


def classify(t: ParamTuple) -> ValidationReport:
    """Validate ``t`` and fill in its regime and special case."""
    report = validate(t)
    if not report.valid:
        return report
    regime = None
    if t.a > 0:
        sigma = sigma_from(t)
        regime = regime_of(s_of(t.n, t.p, t.alpha, sigma), t.p, t.n)
    return ValidationReport(
        valid=True,
        violations=(),
        balance_residual=report.balance_residual,
        special_case=special_case_of(t),
        regime=regime,
        warnings=report.warnings,
    )


def tuple_from_simplified(n: int, p, q, alpha, beta, sigma, a) -> ParamTuple:
    """Build the balanced tuple whose sigma, a, q, beta are given.

    r and gamma are solved from the convex combination and the balance.
    """
    p, q, alpha, beta, sigma, a = map(Fraction, (p, q, alpha, beta, sigma, a))
    s = s_of(n, p, alpha, sigma)
    b = b_of(a, q, s)
    return ParamTuple(
        n=n, p=p, q=q, r=r_of(b, q, s),
        alpha=alpha, beta=beta, gamma=a * sigma + (1 - a) * beta, a=a,
    )


def p_star_or_inf(n: int, p) -> float:
    return float(sobolev_conjugate(n, p)) if p < n else math.inf
