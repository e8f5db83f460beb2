"""Tests for delta-shock construction from the jump relations."""

from fractions import Fraction

import numpy as np
import pytest

from deltashock.core import RiemannData, State, brio_flux, reduced_brio_flux
from deltashock.errors import DegenerateJump
from deltashock.gendelta import (
    carrier_u_speed_amplitude,
    carrier_v_speed_amplitude,
    delta_shock_carrier_u,
    delta_shock_carrier_v,
    nonuniqueness_pair,
)

FLUX = brio_flux()


def test_carrier_v_textbook_example():
    # L=(1,1), R=(0,0): speed 1, amplitude rate -1
    c, rate = carrier_v_speed_amplitude(FLUX, RiemannData(State(1, 1),
                                                          State(0, 0)))
    assert c == 1.0
    assert rate == -1.0


def test_carrier_u_textbook_example_exact_rational():
    data = RiemannData(State(Fraction(3), Fraction(1)),
                       State(Fraction(0), Fraction(-1)))
    c, rate = carrier_u_speed_amplitude(FLUX, data)
    assert c == Fraction(1, 2) and isinstance(c, Fraction)
    assert rate == Fraction(3)


def test_degenerate_jump_raised():
    with pytest.raises(DegenerateJump):
        carrier_v_speed_amplitude(FLUX, RiemannData(State(1, 0), State(1, 2)))
    with pytest.raises(DegenerateJump):
        carrier_u_speed_amplitude(FLUX, RiemannData(State(0, 1), State(2, 1)))


@pytest.mark.parametrize("flux", [brio_flux(), reduced_brio_flux()])
def test_jump_relations_hold_on_random_data(flux):
    rng = np.random.default_rng(11)
    for _ in range(25):
        u1, v1, u2, v2 = rng.uniform(-2, 2, 4)
        data = RiemannData(State(u1, v1), State(u2, v2))
        c, rate = carrier_v_speed_amplitude(flux, data)
        # speed from the first equation, amplitude from the second
        assert c * (u2 - u1) == pytest.approx(flux.f(u2, v2) - flux.f(u1, v1),
                                              abs=1e-12)
        assert rate == pytest.approx(
            c * (v2 - v1) - (flux.g(u2, v2) - flux.g(u1, v1)), abs=1e-12)
        c, rate = carrier_u_speed_amplitude(flux, data)
        assert c * (v2 - v1) == pytest.approx(flux.g(u2, v2) - flux.g(u1, v1),
                                              abs=1e-12)
        assert rate == pytest.approx(
            c * (u2 - u1) - (flux.f(u2, v2) - flux.f(u1, v1)), abs=1e-12)


def test_solution_assembly_carriers():
    sol = delta_shock_carrier_v(FLUX, RiemannData(State(1, 1), State(0, 0)))
    assert sol.carrier == "v"
    arc = sol.graph.arcs[0]
    assert arc.speed == 1.0 and arc.amp_rate == -1.0 and arc.amp0 == 0.0
    sol = delta_shock_carrier_u(FLUX, RiemannData(State(3, 1), State(0, -1)))
    assert sol.carrier == "u"
    assert sol.graph.arcs[0].speed == 0.5


def test_nonuniqueness_pair_structure():
    sol = nonuniqueness_pair(2.0, 0.3, 0.7)
    assert sol.carrier == "v"
    u, v = sol.background.state(np.array([-1.0, 1.0]), 0.5)
    assert np.all(u == 0.0) and np.all(v == 0.0)
    amps = sorted(arc.amp0 for arc in sol.graph.arcs)
    assert amps == [-2.0, 2.0]
    assert all(arc.amp_rate == 0.0 for arc in sol.graph.arcs)
    speeds = sorted(arc.speed for arc in sol.graph.arcs)
    assert speeds == [0.3, 0.7]
