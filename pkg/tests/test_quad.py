import math

import numpy as np
import pytest
from scipy import integrate

from ckn.quad import (
    QuadConfig,
    adaptive_gk21,
    annulus_weight_integral,
    radial_integral,
    substitution_power,
    surface_area,
    weighted_gradient_norm,
    weighted_integral,
    weighted_norm,
)
from ckn.trials import FAMILIES, PIECEWISE, TrialFunction, make_trial

CFG = QuadConfig()


def gaussian(R=10.0):
    return make_trial("gaussian-times-cutoff", (1.0, 0.1), (0.0, R))


def ones(r0, R):
    return make_trial(PIECEWISE, (1.0,), (r0, R))


def test_kronrod_rule_exact_for_polynomials():
    from ckn.quad import GAUSS_WEIGHTS, KRONROD_WEIGHTS, NODES

    for k in range(32):
        exact = 2.0 / (k + 1) if k % 2 == 0 else 0.0
        assert KRONROD_WEIGHTS @ NODES**k == pytest.approx(exact, abs=1e-14)
    for k in range(20):
        exact = 2.0 / (k + 1) if k % 2 == 0 else 0.0
        assert GAUSS_WEIGHTS @ NODES**k == pytest.approx(exact, abs=1e-14)


@pytest.mark.parametrize("func, a, b, points", [
    (np.cos, 0.0, 10.0, ()),
    (lambda x: np.sqrt(x), 0.0, 1.0, ()),
    (lambda x: np.abs(x - 0.3) ** 1.5, 0.0, 1.0, ()),
    (lambda x: np.where(x < 0.5, 1.0, 2.0), 0.0, 1.0, (0.5,)),
    (lambda x: x ** -0.5, 0.0, 2.0, ()),
    (lambda x: np.exp(-x * x), -5.0, 5.0, ()),
])
def test_gk21_against_quadpack(func, a, b, points):
    res = adaptive_gk21(func, a, b, points, rel_tol=1e-10)
    ref, _ = integrate.quad(lambda x: float(func(np.array(x))), a, b, points=points or None,
                            epsabs=0, epsrel=1e-12, limit=500)
    assert res.converged
    assert res.value == pytest.approx(ref, rel=1e-9)
    assert abs(res.value - ref) <= max(res.error_estimate, 1e-12 * abs(ref))


def test_surface_area():
    assert surface_area(2) == pytest.approx(2 * math.pi, rel=1e-15)
    assert surface_area(3) == pytest.approx(4 * math.pi, rel=1e-15)
    assert surface_area(4) == pytest.approx(2 * math.pi**2, rel=1e-15)
    for n in range(2, 12):
        assert surface_area(n + 2) == pytest.approx(2 * math.pi * surface_area(n) / n, rel=1e-13)
    with pytest.raises(ValueError):
        surface_area(1)


def test_substitution_power():
    assert substitution_power(3, 0) == 1
    assert substitution_power(3, -2) == 2
    assert substitution_power(3, -2.5) == 4
    for n, w in [(3, -2.95), (5, -4.5), (2, -1.1)]:
        m = substitution_power(n, w)
        assert m * (n + w) - 1 >= 1 - 1e-12
        assert (m - 1) * (n + w) - 1 < 1


class TestOracles:
    def test_gaussian_integral(self):
        res = weighted_norm(gaussian(), 0, 1, 3)
        assert res.converged
        assert res.value == pytest.approx(math.pi**1.5, rel=1e-8)

    def test_gaussian_gradient(self):
        # 4 pi int 4 t^4 e^{-2t^2} dt = 16 pi Gamma(5/2) / (2 * 2^{5/2})
        exact = math.sqrt(16 * math.pi * math.gamma(2.5) / (2 * 2**2.5))
        assert exact == pytest.approx(math.sqrt(3 * math.pi**1.5 / (2 * math.sqrt(2))), rel=1e-14)
        res = weighted_gradient_norm(gaussian(), 0, 2, 3)
        assert res.value == pytest.approx(exact, rel=1e-8)

    def test_log_annulus(self):
        res = weighted_norm(ones(1.0, 2.0), -3, 1, 3)
        assert res.value == pytest.approx(4 * math.pi * math.log(2), rel=1e-8)

    def test_ball_volume(self):
        for n in (2, 3, 4, 5):
            vol = math.pi ** (n / 2) / math.gamma(n / 2 + 1) * 1.5**n
            assert weighted_norm(ones(0.0, 1.5), 0, 1, n).value == pytest.approx(vol, rel=1e-10)
            assert annulus_weight_integral(n, 0, 0.0, 1.5) == pytest.approx(vol, rel=1e-13)

    def test_zero(self):
        f = make_trial("smooth-bump", (), (0.0, 1.0), amplitude=0.0)
        assert weighted_norm(f, -1, 2, 3).value == 0.0
        assert weighted_norm(make_trial(PIECEWISE, (0.0,), (0.0, 1.0)), 0, 2, 3).value == 0.0

    def test_singular_weight_at_origin(self):
        # int_0^1 t^{n-1+w} dt = 1/(n+w) with n + w = 0.05
        n, w = 3, -2.95
        res = weighted_norm(ones(0.0, 1.0), w, 1, n)
        assert res.value == pytest.approx(surface_area(n) / (n + w), rel=1e-9)

    def test_non_integrable_weight(self):
        with pytest.raises(ValueError, match="non-integrable"):
            weighted_norm(ones(0.0, 1.0), -3, 1, 3)
        # fine away from the origin
        weighted_norm(ones(0.5, 1.0), -3, 1, 3)


def test_plateau_gradient_only_from_ramps():
    f = make_trial("annular-bump", (0.2,), (1.0, 3.0))
    lo_ramp = (1.0, 1.4)
    hi_ramp = (2.6, 3.0)
    assert np.all(f.radial_derivative(np.linspace(1.41, 2.59, 50)) == 0.0)
    ref = sum(
        integrate.quad(lambda t: 4 * math.pi * t**2 * f.radial_derivative(t) ** 2, *ramp, epsrel=1e-13)[0]
        for ramp in (lo_ramp, hi_ramp)
    )
    assert weighted_integral(f, 0, 2, 3, derivative=True).value == pytest.approx(ref, rel=1e-9)


def test_gradient_norm_scaling():
    f = make_trial("smooth-bump", (), (0.0, 1.0))
    n, w, p = 3, 0.5, 2.5
    base = weighted_gradient_norm(f, w, p, n).value
    for lam in (0.25, 3.0):
        scaled = weighted_gradient_norm(f.dilate(lam), w, p, n).value
        assert scaled == pytest.approx(lam ** ((n + w - p) / p) * base, rel=1e-9)


def test_result_invariants():
    for f in (gaussian(), make_trial("smooth-bump", (), (0.0, 2.0)), ones(0.5, 1.0)):
        for e in (0.7, 1.0, 3.0):
            res = weighted_norm(f, -1.5, e, 3, CFG)
            assert res.error_estimate >= 0
            if res.converged:
                assert res.error_estimate <= max(CFG.rel_tol * abs(res.value), CFG.abs_tol)


def _family_samples():
    return [
        make_trial("smooth-bump", (), (0.0, 1.3)),
        make_trial("smooth-bump", (), (0.4, 1.3)),
        make_trial("annular-bump", (0.3,), (0.2, 2.0)),
        make_trial("annular-bump", (0.5,), (0.0, 2.0)),
        make_trial("truncated-power", (-0.7, 0.2), (0.1, 20.0)),
        make_trial("gaussian-times-cutoff", (0.8, 0.2), (0.0, 3.0)),
        make_trial(PIECEWISE, (1.0, 0.5, 2.0), (0.5, 2.0)),
    ]


@pytest.mark.parametrize("f", _family_samples(), ids=lambda f: f.family)
def test_homogeneity(f):
    n, w, e = 3, -1.25, 2.5
    base = weighted_norm(f, w, e, n).value
    for lam in (1 / 8, 0.5, 2.0, 8.0):
        scaled = weighted_norm(f.dilate(lam), w, e, n).value
        assert scaled == pytest.approx(lam ** ((n + w) / e) * base, rel=10 * CFG.rel_tol)


def test_annulus_closed_form_matches_quadrature():
    rng = np.random.default_rng(7)
    for _ in range(100):
        n = int(rng.integers(2, 8))
        w = float(rng.uniform(-n - 3, 4))
        r0 = float(rng.uniform(0.05, 2.0))
        R = r0 * float(rng.uniform(1.01, 50.0))
        exact = annulus_weight_integral(n, w, r0, R)
        quad = radial_integral(lambda t: np.ones_like(t), (r0, R), w, 1.0, n)
        assert quad.value == pytest.approx(exact, rel=1e-10)
    assert annulus_weight_integral(3, -3, 1.0, math.e) == pytest.approx(4 * math.pi, rel=1e-15)
    assert annulus_weight_integral(3, 1, 1.0, 1.0 + 1e-12) == pytest.approx(0.0, abs=1e-10)
    with pytest.raises(ValueError):
        annulus_weight_integral(3, 0, 2.0, 1.0)


@pytest.mark.parametrize("f", [f for f in _family_samples() if f.differentiable], ids=lambda f: f.family)
def test_derivative_matches_finite_differences(f):
    rng = np.random.default_rng(3)
    r0, R = f.support
    lo, hi = (r0 if r0 > 0 else 1e-3), R
    t = rng.uniform(lo, hi, 100)
    h = 1e-6 * np.maximum(t, 1.0)
    fd = (f.value(t + h) - f.value(t - h)) / (2 * h)
    d = f.radial_derivative(t)
    scale = np.maximum(np.abs(d), np.max(np.abs(d)) * 1e-3)
    assert np.max(np.abs(fd - d) / scale) < 1e-6


def test_support_and_boundedness():
    for f in _family_samples():
        r0, R = f.support
        out = np.array([R, R * 1.5, r0 * 0.5 if r0 > 0 else R * 2])
        assert np.all(f.value(out) == 0.0)
        t = np.linspace(r0, R, 2001)
        assert np.all(np.isfinite(f.value(t))) and np.all(np.isfinite(f.radial_derivative(t)))


def test_monotone_in_pointwise_size():
    outer = make_trial("annular-bump", (0.1,), (0.5, 3.0))
    inner = make_trial("annular-bump", (0.2,), (1.0, 2.0), amplitude=0.7)
    t = np.linspace(0, 3.5, 5001)
    assert np.all(np.abs(inner.value(t)) <= np.abs(outer.value(t)))
    for w, e in [(0, 1), (-2, 2), (1.5, 0.8)]:
        assert weighted_norm(inner, w, e, 3).value <= weighted_norm(outer, w, e, 3).value
    big = make_trial("smooth-bump", (), (0.0, 1.0))
    small = big.scaled(0.5)
    assert weighted_norm(small, -1, 3, 4).value <= weighted_norm(big, -1, 3, 4).value


def test_trial_validation():
    with pytest.raises(ValueError):
        TrialFunction("no-such-family")
    with pytest.raises(ValueError):
        make_trial("truncated-power", (-0.5, 0.25), (0.0, 1.0))
    with pytest.raises(ValueError):
        make_trial("smooth-bump", (), (1.0, 1.0))
    assert set(FAMILIES) >= {"smooth-bump", "annular-bump", "truncated-power", "gaussian-times-cutoff"}
    f = make_trial("annular-bump", (0.3,), (0.5, 2.0))
    assert TrialFunction.from_dict(f.to_dict()) == f
