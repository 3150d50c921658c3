"""Finite-difference checks of the pointwise identities used for h(x) = x."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

FD_STEP = np.finfo(float).eps ** (1.0 / 3.0)


@dataclass(frozen=True)
class KillingFieldSpec:
    n: int
    k: float
    epsilon: float = 0.0

    def __post_init__(self):
        if self.epsilon < 0:
            raise ValueError("epsilon must be nonnegative")
        if self.n < 1:
            raise ValueError("n must be >= 1")


@dataclass
class ResidualReport:
    name: str
    max_residual: float
    points_checked: int
    skipped: int = 0
    notes: list = field(default_factory=list)

    def passed(self, tol: float) -> bool:
        return self.points_checked > 0 and self.max_residual < tol

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def _step(x: np.ndarray) -> float:
    return FD_STEP * (1.0 + float(np.linalg.norm(x)))


def scaled_field(x: np.ndarray, k: float, eps: float) -> np.ndarray:
    """x / (eps + |x|^k)."""
    return x / (eps + np.linalg.norm(x) ** k)


def divergence_closed_form(x: np.ndarray, k: float, eps: float) -> float:
    """(n eps + (n-k)|x|^k) / (eps + |x|^k)^2, the mu = 2 case."""
    n = x.size
    rk = float(np.linalg.norm(x)) ** k
    return (n * eps + (n - k) * rk) / (eps + rk) ** 2


def fd_divergence(field_fn, x: np.ndarray) -> float:
    h = _step(x)
    total = 0.0
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = h
        total += (field_fn(x + e)[i] - field_fn(x - e)[i]) / (2.0 * h)
    return total


def fd_gradient(fn, x: np.ndarray) -> np.ndarray:
    h = _step(x)
    g = np.empty_like(x)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = h
        g[i] = (fn(x + e) - fn(x - e)) / (2.0 * h)
    return g


def killing_divergence_check(spec: KillingFieldSpec, points, cfg=None) -> ResidualReport:
    """Compare a central-difference divergence of x/(eps+|x|^k) with its closed form.

    The residual at a point is |fd - exact| / max(1, |exact|).
    """
    rep = ResidualReport("killing_divergence", 0.0, 0)
    singular = spec.epsilon == 0 or spec.k < 0
    for x in points:
        x = np.asarray(x, dtype=float)
        if x.size != spec.n:
            raise ValueError(f"point of dimension {x.size}, expected {spec.n}")
        r = float(np.linalg.norm(x))
        if singular and r <= 10.0 * _step(x):
            rep.skipped += 1
            rep.notes.append(f"point at radius {r:.3e} too close to the origin for the stencil")
            continue
        fd = fd_divergence(lambda y: scaled_field(y, spec.k, spec.epsilon), x)
        exact = divergence_closed_form(x, spec.k, spec.epsilon)
        rep.max_residual = max(rep.max_residual, abs(fd - exact) / max(1.0, abs(exact)))
        rep.points_checked += 1
    return rep


def radial_identity_check(n: int, points) -> ResidualReport:
    """x . grad|x| = |x|, residual relative to |x|."""
    rep = ResidualReport("radial_identity", 0.0, 0)
    for x in points:
        x = np.asarray(x, dtype=float)
        if x.size != n:
            raise ValueError(f"point of dimension {x.size}, expected {n}")
        r = float(np.linalg.norm(x))
        if r <= 10.0 * _step(x):
            rep.skipped += 1
            rep.notes.append(f"point at radius {r:.3e} too close to the origin")
            continue
        g = fd_gradient(lambda y: float(np.linalg.norm(y)), x)
        rep.max_residual = max(rep.max_residual, abs(float(x @ g) - r) / r)
        rep.points_checked += 1
    return rep


def power_mean_gap(a, b, k):
    """2^(k-1)(a^k + b^k) - (a+b)^k, relative to the right side; >= 0 for k >= 1."""
    a, b, k = np.asarray(a, float), np.asarray(b, float), np.asarray(k, float)
    rhs = 2.0 ** (k - 1.0) * (a ** k + b ** k)
    lhs = (a + b) ** k
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(rhs > 0, (rhs - lhs) / rhs, 0.0)


def scalar_inequality_check(samples: int = 10_000, seed: int = 0, k_range=(1.0, 8.0),
                            scale: float = 10.0) -> ResidualReport:
    """(a+b)^k <= 2^(k-1)(a^k + b^k) on random a, b >= 0; max_residual is the worst violation."""
    rng = np.random.default_rng(seed)
    a = rng.random(samples) * scale
    b = rng.random(samples) * scale
    k = rng.uniform(*k_range, samples)
    gap = power_mean_gap(a, b, k)
    worst = float(max(0.0, -gap.min()))
    return ResidualReport("scalar_power_inequality", worst, samples)


def random_points(n: int, count: int, rng, r_min: float = 0.5, r_max: float = 2.0) -> np.ndarray:
    """Points with uniform directions and radii in [r_min, r_max]."""
    d = rng.standard_normal((count, n))
    d /= np.linalg.norm(d, axis=1, keepdims=True)
    r = rng.uniform(r_min, r_max, count)
    return d * r[:, None]


__all__ = [
    "KillingFieldSpec", "ResidualReport", "killing_divergence_check", "radial_identity_check",
    "scalar_inequality_check", "random_points", "divergence_closed_form", "power_mean_gap",
]
