"""Command-line front end.

Exit codes: 0 when every check passes, 1 when any check fails, 2 on a
usage or input error.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from . import identities as ident
from .constants import hardy_constant
from .io import InputError, InputFile, dumps, write_atomic
from .params import DomainError, classify, derive, s_of, sigma_from, validate
from .quad import QuadConfig
from .search import estimate_ratio
from .verify import (
    check_ckn,
    check_holder_chain,
    check_interp_split,
    check_simplified,
    check_subcritical,
    scan_sigma,
)

COMMANDS = ("validate", "derive", "classify", "verify", "estimate", "scan", "identities")
DEFAULT_SEED = 12345
DEFAULT_BUDGET = 200

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


@dataclass
class RunConfig:
    command: str
    input: Optional[str] = None
    output: Optional[str] = None
    seed: int = DEFAULT_SEED
    tol_rel: float = 1e-10
    budget: int = DEFAULT_BUDGET
    omega_factor: bool = True
    format: Optional[str] = None
    extra: dict = field(default_factory=dict)

    @property
    def quad(self) -> QuadConfig:
        return QuadConfig(rel_tol=self.tol_rel)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ckn", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--input", "-i", help="JSON input with sections tuple, trial, grid")
    ap.add_argument("--output", "-o", help="output file (default: stdout)")
    ap.add_argument("--seed", type=int, default=DEFAULT_SEED)
    ap.add_argument("--tol-rel", type=float, default=1e-10, help="relative quadrature tolerance")
    ap.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="ratio-search evaluations")
    ap.add_argument("--omega-factor", choices=("on", "off"), default="on",
                    help="keep the unit-sphere area in the subcritical constant")
    ap.add_argument("--format", choices=("json", "csv"), default=None)
    return ap


def _c_sobolev(inp: InputFile):
    consts = inp.section("constants", required=False) or {}
    value = consts.get("c_sobolev")
    if value is None:
        return None
    try:
        value = float(value)
    except (TypeError, ValueError) as exc:
        raise InputError(f"{inp.path}: constants.c_sobolev must be a number") from exc
    if not value > 0:
        raise InputError(f"{inp.path}: constants.c_sobolev must be positive")
    return value


def _cmd_validate(cfg, inp):
    rep = validate(inp.param_tuple())
    return {"tuple": inp.param_tuple().to_dict(), "report": rep.to_dict()}, rep.valid


def _cmd_classify(cfg, inp):
    rep = classify(inp.param_tuple())
    return {"tuple": inp.param_tuple().to_dict(), "report": rep.to_dict()}, rep.valid


def _cmd_derive(cfg, inp):
    t = inp.param_tuple()
    request = inp.section("request", required=False)
    d = derive(t)
    if request is None:
        return {"tuple": t.to_dict(), "derived": d.to_dict()}, True
    out = {}
    for name in request:
        if name not in d.to_dict():
            raise InputError(f"{inp.path}: unknown derived quantity {name!r}")
        if name == "sigma":
            value = sigma_from(t)  # raises on a = 0
        else:
            value = getattr(d, name)
            if value is None:
                if d.sigma is None and t.a == 0:
                    raise DomainError("sigma undefined at a=0")
                raise DomainError(f"{name} undefined for this tuple")
        out[name] = str(value)
    return {"tuple": t.to_dict(), "derived": out}, True


def _cmd_verify(cfg, inp):
    t = inp.param_tuple()
    trials = inp.trials()
    cS = _c_sobolev(inp)
    q = cfg.quad
    reports = []
    for f in trials:
        reports.append(check_ckn(t, f, q, c_sobolev=cS, omega_factor=cfg.omega_factor, seed=cfg.seed))
        if t.a == 0:
            continue
        reports.append(check_holder_chain(t, f, q))
        sigma = sigma_from(t)
        reports.append(check_simplified(t.n, t.p, t.alpha, sigma, f, q, c_sobolev=cS,
                                        omega_factor=cfg.omega_factor, seed=cfg.seed))
        if t.p < t.n and t.alpha - 1 <= sigma <= t.alpha:
            reports.append(check_interp_split(t.n, t.p, t.alpha, sigma, f, q))
        if s_of(t.n, t.p, t.alpha, sigma) < t.p and f.support[0] > 0:
            reports.append(check_subcritical(t.n, t.p, t.alpha, sigma, f, q, cfg.omega_factor))
    ok = all(r.passed for r in reports)
    return {"tuple": t.to_dict(), "checks": [r.to_dict() for r in reports], "pass": ok}, ok


def _simplified_params(inp):
    t = inp.param_tuple()
    sigma = sigma_from(t)
    override = inp.section("simplified", required=False)
    if override and "sigma" in override:
        sigma = inp.rational("simplified", "sigma")
    return t, sigma


def _cmd_estimate(cfg, inp):
    t, sigma = _simplified_params(inp)
    families = ["smooth-bump"]
    if inp.has("trial"):
        sec = inp.section("trial")
        items = sec if isinstance(sec, list) else [sec]
        if not all(isinstance(d, dict) and "family" in d for d in items):
            raise InputError(f"{inp.path}: every trial needs a 'family'")
        families = [d["family"] for d in items]
    out = []
    for fam in families:
        est = estimate_ratio(t.n, t.p, t.alpha, sigma, fam, cfg.budget, cfg.seed, cfg.quad)
        out.append(est.to_dict())
    body = {"n": t.n, "p": str(t.p), "alpha": str(t.alpha), "sigma": str(sigma), "estimates": out}
    try:
        body["hardy_constant"] = hardy_constant(t.n, t.p, t.alpha)
    except DomainError:
        pass
    return body, True


def _cmd_scan(cfg, inp):
    t = inp.param_tuple()
    table = scan_sigma(t.n, t.p, t.alpha, inp.grid(), inp.trials(), cfg.seed, cfg.quad,
                       c_sobolev=_c_sobolev(inp), budget=cfg.budget, omega_factor=cfg.omega_factor)
    for note in table.notes:
        print(f"note: {note}", file=sys.stderr)
    if (cfg.format or "csv") == "csv":
        return table.to_csv(), table.passed
    rows = [dict(zip(("sigma", "s", "regime", "constant", "constant_tag", "worst_ratio", "trials", "seed"),
                     (str(r.sigma), str(r.s), r.regime, r.constant, r.constant_tag, r.worst_ratio, r.trials, r.seed)))
            for r in table.rows]
    return {"rows": rows, "notes": table.notes}, table.passed


def _cmd_identities(cfg, inp):
    if inp is not None and inp.has("tuple"):
        t = inp.param_tuple()
        cases = [(t.n, t.p, t.alpha)]
    else:
        cases = [(n, Fraction(2), Fraction(0)) for n in (3, 4, 5)]
    rng = np.random.default_rng(cfg.seed)
    results, ok = [], True
    for n, p, alpha in cases:
        pts = ident.random_points(n, 100, rng)
        for spec in (ident.KillingFieldSpec(n, float((1 - alpha) * p), 0.0),
                     ident.KillingFieldSpec(n, float(n), 1.0)):
            rep = ident.killing_divergence_check(spec, pts)
            passed = rep.passed(1e-6)
            ok &= passed
            results.append({**rep.to_dict(), "n": n, "k": spec.k, "epsilon": spec.epsilon, "pass": passed})
        rep = ident.radial_identity_check(n, pts)
        passed = rep.passed(1e-7)
        ok &= passed
        results.append({**rep.to_dict(), "n": n, "pass": passed})
    rep = ident.scalar_inequality_check(seed=cfg.seed)
    passed = rep.max_residual <= 1e-12
    ok &= passed
    results.append({**rep.to_dict(), "pass": passed})
    return {"identities": results, "pass": ok}, ok


HANDLERS = {
    "validate": _cmd_validate,
    "derive": _cmd_derive,
    "classify": _cmd_classify,
    "verify": _cmd_verify,
    "estimate": _cmd_estimate,
    "scan": _cmd_scan,
    "identities": _cmd_identities,
}


def run(cfg: RunConfig) -> int:
    try:
        if cfg.budget < 1:
            raise InputError("--budget must be >= 1")
        if not cfg.tol_rel > 0:
            raise InputError("--tol-rel must be positive")
        inp = None
        if cfg.input is not None:
            inp = InputFile.load(cfg.input)
        elif cfg.command != "identities":
            raise InputError(f"{cfg.command} needs --input")
        body, ok = HANDLERS[cfg.command](cfg, inp)
    except (InputError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = body if isinstance(body, str) else dumps(body)
    if cfg.output:
        write_atomic(cfg.output, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if ok else EXIT_FAIL


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(
        command=args.command,
        input=args.input,
        output=args.output,
        seed=args.seed,
        tol_rel=args.tol_rel,
        budget=args.budget,
        omega_factor=args.omega_factor == "on",
        format=args.format,
    )
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
