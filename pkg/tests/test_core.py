"""Unit tests for states, fluxes, mollifier, and wave-fan plumbing."""

import math
from fractions import Fraction

import numpy as np
import pytest

from deltashock import brio
from deltashock.core import (
    ElementaryWave,
    FanBackground,
    Mollifier,
    RiemannData,
    State,
    WaveFan,
    brio_flux,
    bump,
    bump_test_function,
    canonical_mollifier,
    jacobian_eigen,
    polynomial_flux,
    reduced_brio_flux,
)
from deltashock.errors import NonHyperbolicError, OrderingViolation


def test_state_rejects_non_finite():
    with pytest.raises(ValueError):
        State(math.nan, 0.0)
    with pytest.raises(ValueError):
        State(0.0, math.inf)


def test_state_accepts_fractions():
    s = State(Fraction(3), Fraction(1, 2))
    assert s.u == 3 and s.v == Fraction(1, 2)


def test_riemann_jumps():
    data = RiemannData(State(1.0, 2.0), State(-1.0, 5.0))
    assert data.jumps == (-2.0, 3.0)


def test_brio_flux_values_and_jacobian():
    flux = brio_flux()
    assert flux.f(2.0, 3.0) == pytest.approx((4 + 9) / 2)
    assert flux.g(2.0, 3.0) == pytest.approx(3.0)
    fu, fv, gu, gv = flux.jac(2.0, 3.0)
    assert (fu, fv, gu, gv) == (2.0, 3.0, 3.0, 1.0)


def test_brio_flux_exact_on_fractions():
    flux = brio_flux()
    f = flux.f(Fraction(3), Fraction(1))
    assert f == Fraction(5) and isinstance(f, Fraction)


def test_polynomial_flux_jacobian_matches_finite_differences():
    flux = polynomial_flux({(2, 0): 0.5, (0, 1): -1.0},
                           {(1, 1): 1.0, (0, 2): 0.25})
    rng = np.random.default_rng(3)
    h = 1e-6
    for _ in range(20):
        u, v = rng.uniform(-2, 2, 2)
        fu, fv, gu, gv = flux.jac(u, v)
        assert fu == pytest.approx((flux.f(u + h, v) - flux.f(u - h, v))
                                   / (2 * h), abs=1e-6)
        assert fv == pytest.approx((flux.f(u, v + h) - flux.f(u, v - h))
                                   / (2 * h), abs=1e-6)
        assert gu == pytest.approx((flux.g(u + h, v) - flux.g(u - h, v))
                                   / (2 * h), abs=1e-6)
        assert gv == pytest.approx((flux.g(u, v + h) - flux.g(u, v - h))
                                   / (2 * h), abs=1e-6)


def test_jacobian_eigen_sorted_and_unit():
    flux = brio_flux()
    l1, l2, r1, r2 = jacobian_eigen(flux, State(0.3, -0.7))
    assert l1 < l2
    assert np.linalg.norm(r1) == pytest.approx(1.0)
    assert np.linalg.norm(r2) == pytest.approx(1.0)


def test_jacobian_eigen_rejects_complex_speeds():
    # rotation-type flux: f = -v, g = u has eigenvalues +-i
    flux = polynomial_flux({(0, 1): -1.0}, {(1, 0): 1.0})
    with pytest.raises(NonHyperbolicError):
        jacobian_eigen(flux, State(0.0, 0.0))


def test_mollifier_mass_and_symmetry():
    rho = canonical_mollifier()
    z = np.linspace(-1.5, 1.5, 2001)
    assert np.allclose(rho(z), rho(-z))
    assert rho.antiderivative(1.0) == pytest.approx(1.0, abs=1e-12)
    assert rho.antiderivative(-1.0) == 0.0
    assert float(rho(np.array([1.0]))[0]) == 0.0


def test_mollifier_sqrt_consistency():
    rho = canonical_mollifier()
    z = np.linspace(-0.99, 0.99, 101)
    assert np.allclose(rho.sqrt(z) ** 2, rho(z), atol=1e-14)
    # derivative of sqrt against finite differences
    h = 1e-7
    mid = z[1:-1]
    fd = (rho.sqrt(mid + h) - rho.sqrt(mid - h)) / (2 * h)
    assert np.allclose(rho.sqrt_prime(mid), fd, atol=1e-5)


def test_smooth_step_endpoints_and_clamp():
    rho = canonical_mollifier()
    assert rho.smooth_step(0.0) == 0.0
    assert rho.smooth_step(1.0) == pytest.approx(1.0, abs=1e-12)
    assert rho.smooth_step(-3.0) == 0.0
    assert rho.smooth_step(4.0) == pytest.approx(1.0, abs=1e-12)
    assert float(rho.smooth_step_prime(np.array([-0.1]))[0]) == 0.0
    s = np.linspace(0.05, 0.95, 19)
    h = 1e-7
    fd = (rho.smooth_step(s + h) - rho.smooth_step(s - h)) / (2 * h)
    assert np.allclose(rho.smooth_step_prime(s), fd, atol=1e-5)


def test_test_function_partials_match_finite_differences():
    phi = bump_test_function(0.3, 1.2, 0.4, 0.6)
    rng = np.random.default_rng(0)
    h = 1e-7
    for _ in range(10):
        x = rng.uniform(-0.8, 1.4)
        t = rng.uniform(-0.1, 0.9)
        fx = (phi.phi(x + h, t) - phi.phi(x - h, t)) / (2 * h)
        ft = (phi.phi(x, t + h) - phi.phi(x, t - h)) / (2 * h)
        assert phi.phi_x(x, t) == pytest.approx(fx, abs=1e-5)
        assert phi.phi_t(x, t) == pytest.approx(ft, abs=1e-5)


def test_elementary_wave_rh_validation():
    flux = brio_flux()
    wave = ElementaryWave(kind="shock", family=2, left=State(0.3, 1.0),
                          right=State(1.0, 2.0), speed=0.123)
    with pytest.raises(ValueError):
        wave.validate(flux)


def test_wave_fan_ordering_violation():
    flux = brio_flux()
    L, R = State(0.0, 1.0), State(0.0, -1.0)
    fan = brio.solve_riemann_sign_change(L, R)
    reversed_fan = WaveFan(tuple(reversed(fan.waves)))
    with pytest.raises(OrderingViolation):
        reversed_fan.validate(flux)


def test_fan_background_matches_constant_states_outside_waves():
    flux = brio_flux()
    fan = brio.solve_riemann_sign_change(State(0.0, 1.0), State(0.0, -1.0))
    bg = FanBackground(fan, flux)
    speeds = [s for w in fan.waves for s in w.speed_span()]
    lo, hi = min(speeds), max(speeds)
    t = 0.7
    u, v = bg.state(np.array([(lo - 1.0) * t, (hi + 1.0) * t]),
                    np.array([t, t]))
    assert (u[0], v[0]) == (0.0, 1.0)
    assert (u[1], v[1]) == (0.0, -1.0)


def test_reduced_flux_differs_from_brio():
    a, b = brio_flux(), reduced_brio_flux()
    assert a.f(1.0, 2.0) != b.f(1.0, 2.0)
    assert a.g(1.0, 2.0) == b.g(1.0, 2.0)
