"""Tests for the weak-form verifier: quadrature, sensitivity, batteries."""

import numpy as np
import pytest

from deltashock import weakform
from deltashock.core import (
    Arc,
    ConstantBackground,
    RiemannData,
    ShockGraph,
    SingularSolution,
    State,
    brio_flux,
    bump_test_function,
)
from deltashock.gendelta import delta_shock_carrier_u, delta_shock_carrier_v

FLUX = brio_flux()


def test_tangential_term_against_dense_oracle():
    arc = Arc(x0=0.2, speed=-0.4, amp_rate=1.3)
    phi = bump_test_function(0.0, 1.5, 0.5, 0.45)
    # independent oracle: trapezoid rule on a dense grid
    t = np.linspace(0.05, 0.95, 400001)
    x = arc.x(t)
    integrand = arc.amplitude(t) * (phi.phi_t(x, t)
                                    + arc.speed * phi.phi_x(x, t))
    oracle = np.trapezoid(integrand, t)
    val = weakform.tangential_term(arc, phi)
    assert val == pytest.approx(oracle, abs=1e-8)


def test_spacetime_integral_of_derivatives_is_boundary_term():
    # for a constant background, the bulk integral telescopes to the
    # initial-data term whenever the support crosses t = 0
    bg = ConstantBackground(0.7, -0.3)
    phi = bump_test_function(0.1, 1.0, 0.2, 0.5)
    bulk = weakform._spacetime_integral(
        bg, lambda u, v: u, lambda u, v: FLUX.f(u, v), phi)
    init = weakform._initial_term(bg, lambda u, v: u, phi)
    assert bulk + init == pytest.approx(0.0, abs=1e-8)


def test_exact_solutions_verify_to_quadrature_floor():
    sol = delta_shock_carrier_v(FLUX, RiemannData(State(1, 1), State(0, 0)))
    report = weakform.verify(sol, FLUX, weakform.standard_battery([1.0]),
                             tol=1e-7)
    assert report.passed
    assert report.max_residual < 1e-8


def test_verifier_detects_wrong_amplitude():
    data = RiemannData(State(1, 1), State(0, 0))
    background = delta_shock_carrier_v(FLUX, data).background
    wrong = SingularSolution(
        carrier="v", background=background,
        graph=ShockGraph(arcs=(Arc(x0=0.0, speed=1.0, amp_rate=-0.9),)),
    )
    report = weakform.verify(wrong, FLUX, weakform.standard_battery([1.0]),
                             tol=1e-7)
    assert not report.passed
    assert report.max_residual > 1e-4


def test_verifier_detects_wrong_speed():
    data = RiemannData(State(3, 1), State(0, -1))
    good = delta_shock_carrier_u(FLUX, data)
    wrong = SingularSolution(
        carrier="u",
        background=type(good.background)(data=data, speed=0.55),
        graph=ShockGraph(arcs=(Arc(x0=0.0, speed=0.55, amp_rate=3.0),)),
    )
    report = weakform.verify(wrong, FLUX, weakform.standard_battery([0.55]),
                             tol=1e-7)
    assert not report.passed


def test_standard_battery_shape():
    battery = weakform.standard_battery([0.5, -1.0])
    assert len(battery) == 12
    labels = [phi.label for phi in battery]
    assert len(set(labels)) == 12
    assert any(phi.support[2] < 0.0 for phi in battery)  # t=0 covered


def test_refinement_converges_spectrally():
    sol = delta_shock_carrier_u(FLUX, RiemannData(State(3, 1), State(0, -1)))
    phi = weakform.standard_battery([0.5])[3]
    r1 = max(abs(r) for r in weakform.residuals(sol, FLUX, phi, refine=1))
    r2 = max(abs(r) for r in weakform.residuals(sol, FLUX, phi, refine=2))
    assert r2 < max(r1 / 10.0, 1e-14)


def test_report_csv(tmp_path):
    sol = delta_shock_carrier_v(FLUX, RiemannData(State(1, 1), State(0, 0)))
    report = weakform.verify(sol, FLUX, weakform.standard_battery([1.0]),
                             tol=1e-7)
    path = tmp_path / "report.csv"
    report.to_csv(str(path))
    lines = path.read_text().splitlines()
    assert lines[0].startswith("phi_id")
    assert len(lines) == 13
