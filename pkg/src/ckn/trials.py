"""Compactly supported radial trial profiles.

A profile is a function of the radius t = |x|.  Every family is written
on a base support [r0, R]; :meth:`TrialFunction.dilate` produces
f(t / lam) on [lam*r0, lam*R] without re-parametrising the shape.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

SMOOTH_BUMP = "smooth-bump"
ANNULAR_BUMP = "annular-bump"
TRUNCATED_POWER = "truncated-power"
GAUSSIAN_CUTOFF = "gaussian-times-cutoff"
PIECEWISE = "piecewise-test"

FAMILIES = (SMOOTH_BUMP, ANNULAR_BUMP, TRUNCATED_POWER, GAUSSIAN_CUTOFF, PIECEWISE)

# default shape parameters per family
DEFAULT_PARAMS = {
    SMOOTH_BUMP: (),
    ANNULAR_BUMP: (0.25,),
    TRUNCATED_POWER: (-0.5, 0.25),
    GAUSSIAN_CUTOFF: (1.0, 0.1),
    PIECEWISE: (1.0,),
}


def smoothstep(x):
    """Quintic ramp, C^2, 0 for x <= 0 and 1 for x >= 1."""
    x = np.clip(x, 0.0, 1.0)
    return x * x * x * (x * (6.0 * x - 15.0) + 10.0)


def smoothstep_prime(x):
    inside = (x > 0.0) & (x < 1.0)
    x = np.clip(x, 0.0, 1.0)
    return np.where(inside, 30.0 * x * x * (1.0 - x) ** 2, 0.0)


@dataclass(frozen=True)
class TrialFunction:
    family: str
    params: tuple = ()
    r0: float = 0.0
    R: float = 1.0
    amplitude: float = 1.0
    scale: float = field(default=1.0)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown trial family {self.family!r}; choose from {FAMILIES}")
        params = tuple(float(x) for x in self.params)
        object.__setattr__(self, "params", params)
        if not (0.0 <= self.r0 < self.R) or not math.isfinite(self.R):
            raise ValueError(f"bad support [{self.r0}, {self.R}]: need 0 <= r0 < R < inf")
        if not self.scale > 0:
            raise ValueError("scale must be positive")
        self._check_params()

    def _check_params(self):
        fam, p = self.family, self.params
        expected = {SMOOTH_BUMP: 0, ANNULAR_BUMP: 1, TRUNCATED_POWER: 2, GAUSSIAN_CUTOFF: 2}
        if fam in expected and len(p) != expected[fam]:
            raise ValueError(f"{fam} takes {expected[fam]} shape parameter(s), got {len(p)}")
        if fam == ANNULAR_BUMP and not 0 < p[0] <= 0.5:
            raise ValueError("annular-bump ramp fraction must lie in (0, 0.5]")
        if fam == TRUNCATED_POWER:
            if self.r0 <= 0:
                raise ValueError("truncated-power needs an annular support (r0 > 0)")
            if not 0 < p[1] <= 0.5:
                raise ValueError("truncated-power ramp fraction must lie in (0, 0.5]")
        if fam == GAUSSIAN_CUTOFF and not (p[0] > 0 and 0 < p[1] <= 0.5):
            raise ValueError("gaussian-times-cutoff needs scale > 0 and cutoff fraction in (0, 0.5]")
        if fam == PIECEWISE and len(p) < 1:
            raise ValueError("piecewise-test needs at least one level")

    # -- geometry ---------------------------------------------------------

    @property
    def support(self) -> tuple[float, float]:
        return (self.scale * self.r0, self.scale * self.R)

    @property
    def differentiable(self) -> bool:
        if self.family == PIECEWISE:
            return self.amplitude == 0 or all(v == 0 for v in self.params)
        return True

    def dilate(self, lam: float) -> "TrialFunction":
        """The profile t -> f(t / lam)."""
        return replace(self, scale=self.scale * lam)

    def scaled(self, amplitude: float) -> "TrialFunction":
        return replace(self, amplitude=self.amplitude * amplitude)

    def breakpoints(self) -> list[float]:
        """Interior radii where the profile or its derivative is not smooth."""
        return [self.scale * x for x in self._base_breakpoints()]

    def _base_breakpoints(self):
        r0, R, p = self.r0, self.R, self.params
        if self.family == SMOOTH_BUMP:
            return [] if r0 == 0 else [0.5 * (r0 + R)]
        if self.family == ANNULAR_BUMP:
            h = p[0] * (R - r0)
            return [R - h] if r0 == 0 else [r0 + h, R - h]
        if self.family == TRUNCATED_POWER:
            span = math.log(R / r0)
            return [r0 * math.exp(p[1] * span), R * math.exp(-p[1] * span)]
        if self.family == GAUSSIAN_CUTOFF:
            h = p[1] * (R - r0)
            return [R - h] if r0 == 0 else [r0 + h, R - h]
        k = len(p)
        return [r0 + (R - r0) * i / k for i in range(1, k)]

    # -- evaluation -------------------------------------------------------

    def value(self, t):
        t = np.asarray(t, dtype=float)
        v, _ = self._eval(t / self.scale, want_derivative=False)
        return self.amplitude * v

    def radial_derivative(self, t):
        t = np.asarray(t, dtype=float)
        _, d = self._eval(t / self.scale, want_derivative=True)
        return self.amplitude * d / self.scale

    def __call__(self, t):
        return self.value(t)

    def _eval(self, t, want_derivative):
        r0, R, p = self.r0, self.R, self.params
        inside = (t > r0) & (t < R) if r0 > 0 else (t >= 0) & (t < R)
        zero = np.zeros_like(t)
        fam = self.family

        if fam == SMOOTH_BUMP:
            if r0 == 0:
                x, dxdt = t / R, 1.0 / R
            else:
                x, dxdt = (2.0 * t - r0 - R) / (R - r0), 2.0 / (R - r0)
            xs = np.where(inside, x, 0.0)
            q = 1.0 - xs * xs
            v = np.where(inside, np.exp(1.0 - 1.0 / q), 0.0)
            d = np.where(inside, v * (-2.0 * xs / (q * q)) * dxdt, 0.0) if want_derivative else zero
            return v, d

        if fam in (ANNULAR_BUMP, GAUSSIAN_CUTOFF):
            h = p[-1] * (R - r0) if fam == GAUSSIAN_CUTOFF else p[0] * (R - r0)
            win = smoothstep((R - t) / h)
            dwin = -smoothstep_prime((R - t) / h) / h
            if r0 > 0:
                inner = smoothstep((t - r0) / h)
                dinner = smoothstep_prime((t - r0) / h) / h
                dwin = dwin * inner + win * dinner
                win = win * inner
            if fam == ANNULAR_BUMP:
                v = np.where(inside, win, 0.0)
                d = np.where(inside, dwin, 0.0)
                return v, d
            g = np.exp(-((t / p[0]) ** 2))
            dg = -2.0 * t / p[0] ** 2 * g
            v = np.where(inside, g * win, 0.0)
            d = np.where(inside, dg * win + g * dwin, 0.0)
            return v, d

        if fam == TRUNCATED_POWER:
            power, ramp = p
            ell = ramp * math.log(R / r0)
            ts = np.where(inside, t, r0 + 0.5 * (R - r0))
            lt = np.log(ts)
            a = (lt - math.log(r0)) / ell
            b = (math.log(R) - lt) / ell
            win = smoothstep(a) * smoothstep(b)
            core = ts ** power
            v = np.where(inside, core * win, 0.0)
            if not want_derivative:
                return v, zero
            dwin_dy = (smoothstep_prime(a) * smoothstep(b) - smoothstep(a) * smoothstep_prime(b)) / ell
            d = np.where(inside, ts ** (power - 1.0) * (power * win + dwin_dy), 0.0)
            return v, d

        # piecewise-test: constant levels on equal sub-intervals
        k = len(p)
        idx = np.clip(((t - r0) / (R - r0) * k).astype(int), 0, k - 1)
        v = np.where(inside, np.asarray(p)[idx], 0.0)
        return v, zero

    # -- serialisation ----------------------------------------------------

    def to_dict(self) -> dict:
        r0, R = self.support
        return {
            "family": self.family,
            "params": list(self.params),
            "support": [r0, R],
            "amplitude": self.amplitude,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TrialFunction":
        family = d["family"]
        params = d.get("params", DEFAULT_PARAMS.get(family, ()))
        r0, R = d.get("support", (0.0, 1.0))
        return cls(family, tuple(params), float(r0), float(R), float(d.get("amplitude", 1.0)))


def make_trial(family: str, params=None, support=(0.0, 1.0), amplitude: float = 1.0) -> TrialFunction:
    if params is None:
        params = DEFAULT_PARAMS.get(family, ())
    r0, R = support
    return TrialFunction(family, tuple(params), float(r0), float(R), amplitude)
