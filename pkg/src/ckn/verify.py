"""Numerical checks of the inequalities on radial trial functions.

Every check evaluates both sides by quadrature and reports the ratio
lhs / (constant * rhs).  A check passes when that ratio is at most
1 + slack with slack = max(10 * relative quadrature error, 1e-9).
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from . import constants as K
from .params import (
    DomainError,
    ParamTuple,
    interpolation_weights,
    kappa_of,
    regime_of,
    s_of,
    sigma_from,
    sobolev_conjugate,
    validate,
)
from .quad import DEFAULT_CONFIG, IntegralResult, QuadConfig, surface_area, weighted_gradient_norm, weighted_integral, weighted_norm
from .trials import TrialFunction

MIN_SLACK = 1e-9
INDICATIVE = "indicative only: constant is an empirical lower bound"


@dataclass
class CheckReport:
    name: str
    lhs: float
    rhs_factors: list
    constant_used: float
    constant_tag: str
    ratio: float
    passed: bool
    quadrature_errors: list
    slack: float
    flags: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    @property
    def indicative_only(self) -> bool:
        return self.constant_tag == K.EMPIRICAL

    def to_dict(self) -> dict:
        return {
            "check": self.name,
            "lhs": self.lhs,
            "rhs_factors": [[label, v] for label, v in self.rhs_factors],
            "constant_used": self.constant_used,
            "constant_tag": self.constant_tag,
            "ratio": self.ratio,
            "pass": self.passed,
            "quadrature_errors": list(self.quadrature_errors),
            "slack": self.slack,
            "flags": list(self.flags),
            "extra": dict(self.extra),
        }


def slack_from(rel_error: float) -> float:
    return max(10.0 * rel_error, MIN_SLACK)


def _ratio(num: float, den: float) -> float:
    if num == 0.0:
        return 0.0
    return num / den if den > 0 else math.inf


def _powered_rel(terms) -> float:
    """Relative error of prod(x_i ** k_i) from first-order propagation."""
    return sum(abs(k) * r.rel_error for r, k in terms if r.value != 0.0 or r.error_estimate != 0.0)


def _report(name, lhs: IntegralResult, factors, constant, tag, extra_terms=(), flags=None, extra=None):
    """factors: (label, IntegralResult, power) triples forming the right side."""
    rhs = constant
    for _, res, k in factors:
        rhs *= res.value ** k if k != 0 else 1.0
    ratio = _ratio(lhs.value, rhs)
    terms = [(lhs, 1.0)] + [(res, k) for _, res, k in factors] + list(extra_terms)
    rel = _powered_rel(terms) if ratio > 0 else 0.0
    slack = slack_from(rel)
    flags = list(flags or [])
    if tag == K.EMPIRICAL:
        flags.append(INDICATIVE)
    results = [lhs] + [res for _, res, _ in factors] + [r for r, _ in extra_terms]
    if not all(r.converged for r in results):
        flags.append("quadrature did not converge")
    return CheckReport(
        name=name,
        lhs=lhs.value,
        rhs_factors=[(label, res.value ** k if k != 0 else 1.0) for label, res, k in factors],
        constant_used=constant,
        constant_tag=tag,
        ratio=ratio,
        passed=bool(ratio <= 1.0 + slack),
        quadrature_errors=[r.error_estimate for r in results],
        slack=slack,
        flags=flags,
        extra=dict(extra or {}),
    )


# ---------------------------------------------------------------------------


def check_admissible(n: int, p, alpha, sigma) -> Fraction:
    """Admissibility of (n, p, alpha, sigma) for the simplified inequality; returns s."""
    p, alpha, sigma = map(Fraction, (p, alpha, sigma))
    if n < 2:
        raise DomainError("radial quadrature needs n >= 2")
    if p < 1:
        raise DomainError("p must be at least 1")
    if alpha * p <= -n:
        raise DomainError("inadmissible: alpha p <= -n")
    if sigma > alpha:
        raise DomainError("inadmissible: sigma > alpha")
    s = s_of(n, p, alpha, sigma)
    if s * sigma <= -n:
        raise DomainError("inadmissible: s sigma <= -n")
    return s


def _need_differentiable(f: TrialFunction):
    if not f.differentiable:
        raise DomainError(f"{f.family} is not a differentiable trial family")


def ui_ratio(n: int, p, alpha, sigma, f: TrialFunction, cfg: Optional[QuadConfig] = None, s=None):
    """lhs / rhs of the simplified inequality without constant.

    Returns (ratio, relative error, lhs result, gradient result).  ``s``
    overrides the balanced exponent; only meaningful for power checks.
    """
    cfg = cfg or DEFAULT_CONFIG
    if s is None:
        s = check_admissible(n, p, alpha, sigma)
    s, sigma = float(s), float(sigma)
    lhs = weighted_norm(f, sigma * s, s, n, cfg)
    grad = weighted_gradient_norm(f, float(alpha) * float(p), p, n, cfg)
    ratio = _ratio(lhs.value, grad.value)
    return ratio, lhs.rel_error + grad.rel_error, lhs, grad


class ConstantResolver:
    """Picks the constant of the simplified inequality for a trial.

    Empirical estimates are computed once and reused.
    """

    def __init__(self, n, p, alpha, c_sobolev=None, omega_factor=True, budget=60, seed=0,
                 cfg=None, extra_trials=()):
        self.n, self.p, self.alpha = n, Fraction(p), Fraction(alpha)
        self.c_sobolev = c_sobolev
        self.omega_factor = omega_factor
        self.budget, self.seed = budget, seed
        self.cfg = cfg
        self.extra_trials = tuple(extra_trials)
        self._sobolev = None
        self._empirical = {}

    def sobolev(self):
        if self._sobolev is None:
            self._sobolev = K.sobolev_constant_bound(
                self.n, self.p, self.alpha, source=self.c_sobolev, budget=self.budget,
                seed=self.seed, extra_trials=self.extra_trials, cfg=self.cfg)
        return self._sobolev

    def __call__(self, sigma, f: TrialFunction):
        n, p, alpha = self.n, self.p, self.alpha
        sigma = Fraction(sigma)
        s = s_of(n, p, alpha, sigma)
        if s < p:
            r0, R = f.support
            if r0 <= 0:
                raise DomainError("subcritical check requires annular support (r0 > 0)")
            b = K.compose_constants(n, p, alpha, sigma, support=(r0, R), omega_factor=self.omega_factor)
            return b.c_composed, b.composed_tag
        if s == p:
            return K.hardy_constant(n, p, alpha), K.CLOSED_FORM
        if p < n:
            cS, tag = self.sobolev()
            b = K.compose_constants(n, p, alpha, sigma, c_sobolev=cS, sobolev_tag=tag)
            return b.c_composed, b.composed_tag
        # p >= n: no Sobolev endpoint, fall back to a direct estimate
        if sigma not in self._empirical:
            from .search import estimate_ratio

            est = estimate_ratio(n, p, alpha, sigma, "smooth-bump", self.budget, self.seed, self.cfg)
            best = est.best_ratio
            for g in self.extra_trials:
                best = max(best, ui_ratio(n, p, alpha, sigma, g, self.cfg)[0])
            self._empirical[sigma] = best
        return self._empirical[sigma], K.EMPIRICAL


def check_simplified(n: int, p, alpha, sigma, f: TrialFunction, cfg: Optional[QuadConfig] = None,
                     c_sobolev=None, omega_factor: bool = True, resolver: Optional[ConstantResolver] = None,
                     seed: int = 0) -> CheckReport:
    """(int |x|^{sigma s}|u|^s)^{1/s} <= C (int |x|^{alpha p}|grad u|^p)^{1/p}."""
    cfg = cfg or DEFAULT_CONFIG
    _need_differentiable(f)
    s = check_admissible(n, p, alpha, sigma)
    resolver = resolver or ConstantResolver(n, p, alpha, c_sobolev, omega_factor, seed=seed, cfg=cfg)
    _, _, lhs, grad = ui_ratio(n, p, alpha, sigma, f, cfg, s)
    if lhs.value == 0.0:
        constant, tag = math.nan, K.CLOSED_FORM
        try:
            constant, tag = resolver(sigma, f)
        except DomainError:
            pass
    else:
        constant, tag = resolver(sigma, f)
    regime = regime_of(s, Fraction(p), n)
    return _report(
        "simplified", lhs, [("gradient_norm", grad, 1.0)], constant, tag,
        extra={"s": str(s), "regime": regime},
    )


def _simplified_constant(t: ParamTuple, sigma, f, cfg, c_sobolev, omega_factor, seed):
    resolver = ConstantResolver(t.n, t.p, t.alpha, c_sobolev, omega_factor, seed=seed, cfg=cfg)
    return resolver(sigma, f)


def _require_valid(t: ParamTuple):
    report = validate(t)
    if not report.valid:
        names = ", ".join(v.condition for v in report.violations)
        raise DomainError(f"invalid parameter tuple: {names}")


def check_ckn(t: ParamTuple, f: TrialFunction, cfg: Optional[QuadConfig] = None, c_sobolev=None,
              omega_factor: bool = True, seed: int = 0) -> CheckReport:
    """The full interpolation inequality with constant C^a from the simplified one."""
    cfg = cfg or DEFAULT_CONFIG
    _require_valid(t)
    _need_differentiable(f)
    n = t.n
    lhs = weighted_norm(f, t.gamma * t.r, t.r, n, cfg)
    q_norm = weighted_norm(f, t.beta * t.q, t.q, n, cfg)
    if t.a == 0:
        # both sides coincide: gamma = beta and r = q
        rep = _report("ckn", lhs, [("q_norm", q_norm, 1.0)], 1.0, K.CLOSED_FORM)
        rep.extra["equality"] = True
        rep.passed = abs(rep.ratio - 1.0) <= rep.slack or (lhs.value == 0.0 and q_norm.value == 0.0)
        return rep
    sigma = sigma_from(t)
    a = float(t.a)
    grad = weighted_gradient_norm(f, t.alpha * t.p, t.p, n, cfg)
    if lhs.value == 0.0:
        return _report("ckn", lhs, [("gradient_norm^a", grad, a), ("q_norm^(1-a)", q_norm, 1 - a)],
                       math.nan, K.CLOSED_FORM)
    C, tag = _simplified_constant(t, sigma, f, cfg, c_sobolev, omega_factor, seed)
    factors = [("gradient_norm^a", grad, a)]
    if t.a < 1:
        factors.append(("q_norm^(1-a)", q_norm, 1 - a))
    return _report("ckn", lhs, factors, C ** a, tag, extra={"simplified_constant": C, "sigma": str(sigma)})


def check_holder_chain(t: ParamTuple, f: TrialFunction, cfg: Optional[QuadConfig] = None) -> CheckReport:
    """Constant-free Hoelder step: r-norm <= q-norm^(1-a) * s-norm^a."""
    cfg = cfg or DEFAULT_CONFIG
    _require_valid(t)
    if t.a == 0:
        raise DomainError("Hoelder chain needs a > 0")
    n = t.n
    sigma = sigma_from(t)
    s = s_of(n, t.p, t.alpha, sigma)
    a = float(t.a)
    lhs = weighted_norm(f, t.gamma * t.r, t.r, n, cfg)
    s_norm = weighted_norm(f, sigma * s, s, n, cfg)
    factors = [("s_norm^a", s_norm, a)]
    if t.a < 1:
        factors.append(("q_norm^(1-a)", weighted_norm(f, t.beta * t.q, t.q, n, cfg), 1 - a))
    return _report("holder_chain", lhs, factors, 1.0, K.CLOSED_FORM, extra={"s": str(s)})


def check_interp_split(n: int, p, alpha, sigma, f: TrialFunction, cfg: Optional[QuadConfig] = None) -> CheckReport:
    """int |x|^{sigma s}|u|^s <= (Hardy integral)^(1-c) (Sobolev integral)^c."""
    cfg = cfg or DEFAULT_CONFIG
    p, alpha, sigma = map(Fraction, (p, alpha, sigma))
    theta, c = interpolation_weights(n, p, alpha, sigma)
    s = s_of(n, p, alpha, sigma)
    p_star = sobolev_conjugate(n, p)
    lhs = weighted_integral(f, sigma * s, s, n, cfg)
    factors = []
    if c < 1:
        factors.append(("hardy_integral^(1-c)", weighted_integral(f, (alpha - 1) * p, p, n, cfg), float(1 - c)))
    if c > 0:
        factors.append(("sobolev_integral^c", weighted_integral(f, alpha * p_star, p_star, n, cfg), float(c)))
    return _report("interp_split", lhs, factors, 1.0, K.CLOSED_FORM,
                   extra={"theta": str(theta), "c": str(c), "s": str(s)})


def check_subcritical(n: int, p, alpha, sigma, f: TrialFunction, cfg: Optional[QuadConfig] = None,
                      omega_factor: bool = True) -> CheckReport:
    """Hoelder on the support annulus, then the weighted Hardy inequality.

    Reports the intermediate ratio lhs / (Hardy norm * L^kappa) and the
    final ratio lhs / (C_H * L^kappa * gradient norm), where
    L = omega_{n-1} ln(R/r0), or ln(R/r0) with ``omega_factor=False``.
    """
    cfg = cfg or DEFAULT_CONFIG
    _need_differentiable(f)
    p, alpha, sigma = map(Fraction, (p, alpha, sigma))
    s = check_admissible(n, p, alpha, sigma)
    if s >= p:
        raise DomainError("subcritical check needs s < p")
    r0, R = f.support
    if r0 <= 0:
        raise DomainError("subcritical check requires annular support (r0 > 0)")
    kappa = kappa_of(s, p)
    L = math.log(R / r0) * (surface_area(n) if omega_factor else 1.0)
    log_factor = L ** float(kappa)
    cH = K.hardy_constant(n, p, alpha)
    lhs = weighted_norm(f, sigma * s, s, n, cfg)
    hardy = weighted_norm(f, (alpha - 1) * p, p, n, cfg)
    grad = weighted_gradient_norm(f, alpha * p, p, n, cfg)
    tag = K.CLOSED_FORM if omega_factor else K.OMEGA_FREE

    step = _report("subcritical_holder", lhs, [("hardy_norm", hardy, 1.0)], log_factor, tag)
    rep = _report("subcritical", lhs, [("gradient_norm", grad, 1.0)], cH * log_factor, tag,
                  extra={"s": str(s), "kappa": str(kappa), "log_factor": log_factor})
    rep.extra["intermediate_ratio"] = step.ratio
    rep.extra["final_ratio"] = rep.ratio
    rep.passed = rep.passed and step.passed
    rep.slack = max(rep.slack, step.slack)
    if not rep.passed and not omega_factor:
        rep.flags.append("discrepant: bound without the sphere-area factor is violated")
    return rep


# ---------------------------------------------------------------------------


SCAN_COLUMNS = ("sigma", "s", "regime", "constant", "constant_tag", "worst_ratio", "trials", "seed")


@dataclass
class ScanRow:
    sigma: Fraction
    s: Fraction
    regime: str
    constant: float
    constant_tag: str
    worst_ratio: float
    trials: int
    seed: int
    passed: bool = True


@dataclass
class ScanTable:
    rows: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(SCAN_COLUMNS)
        for r in self.rows:
            w.writerow([str(r.sigma), str(r.s), r.regime, repr(r.constant), r.constant_tag,
                        repr(r.worst_ratio), r.trials, r.seed])
        return buf.getvalue()


def scan_sigma(n: int, p, alpha, sigma_grid: Sequence, trials: Sequence[TrialFunction], seed: int = 0,
               cfg: Optional[QuadConfig] = None, c_sobolev=None, budget: int = 60,
               omega_factor: bool = True) -> ScanTable:
    """check_simplified over a sigma grid; one row per admissible grid point."""
    cfg = cfg or DEFAULT_CONFIG
    table = ScanTable()
    resolver = ConstantResolver(n, p, alpha, c_sobolev, omega_factor, budget, seed, cfg, trials)
    for sigma in sorted(Fraction(x) for x in sigma_grid):
        try:
            s = check_admissible(n, p, alpha, sigma)
        except DomainError as exc:
            table.notes.append(f"sigma={sigma} skipped: {exc}")
            continue
        worst, worst_const, tag, used, ok = -math.inf, math.nan, K.CLOSED_FORM, 0, True
        for f in trials:
            try:
                rep = check_simplified(n, p, alpha, sigma, f, cfg, resolver=resolver)
            except DomainError as exc:
                table.notes.append(f"sigma={sigma}, trial {f.family}: {exc}")
                continue
            used += 1
            ok = ok and rep.passed
            tag = K.weakest(tag, rep.constant_tag)
            if rep.ratio > worst:
                worst, worst_const = rep.ratio, rep.constant_used
        if used == 0:
            worst = math.nan
        table.rows.append(ScanRow(sigma, s, regime_of(s, Fraction(p), n), worst_const, tag,
                                  worst, used, seed, ok))
    return table
