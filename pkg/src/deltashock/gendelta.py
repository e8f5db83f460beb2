"""Generic delta-shock constructors for arbitrary 2x2 fluxes.

Both carriers are supported: the singular part may sit in v (with the
speed fixed by the Rankine-Hugoniot condition of the first equation) or
in u (speed from the second equation).  Also provides the two-delta
zero-data non-uniqueness example.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import (
    Arc,
    ConstantBackground,
    FluxPair,
    RiemannBackground,
    RiemannData,
    ShockGraph,
    SingularSolution,
)
from .errors import DegenerateJump

__all__ = [
    "DeltaShockSpec",
    "carrier_v_speed_amplitude",
    "carrier_u_speed_amplitude",
    "delta_shock_carrier_v",
    "delta_shock_carrier_u",
    "nonuniqueness_pair",
]


@dataclass(frozen=True)
class DeltaShockSpec:
    """A single straight delta-shock: carrier, speed and amplitude rate.

    The amplitude grows linearly, alpha(t) = amp_rate * t, starting from
    zero.  A zero amp_rate is a legitimate classical shock; a degenerate
    jump (speed undefined) is an error instead.
    """

    carrier: str
    speed: float
    amp_rate: float
    data: RiemannData


def carrier_v_speed_amplitude(flux: FluxPair, data: RiemannData):
    """Speed c = [f]/[u] and amplitude rate c[V] - [g].

    Pure arithmetic: exact on Fraction inputs.
    """
    u1, v1 = data.left.u, data.left.v
    u2, v2 = data.right.u, data.right.v
    if u1 == u2:
        raise DegenerateJump("u1 == u2: carrier-v speed [f]/[u] undefined")
    f1, g1 = flux(u1, v1)
    f2, g2 = flux(u2, v2)
    c = (f2 - f1) / (u2 - u1)
    amp_rate = c * (v2 - v1) - (g2 - g1)
    return c, amp_rate


def carrier_u_speed_amplitude(flux: FluxPair, data: RiemannData):
    """Speed c = [g]/[v] and amplitude rate c[U] - [f]."""
    u1, v1 = data.left.u, data.left.v
    u2, v2 = data.right.u, data.right.v
    if v1 == v2:
        raise DegenerateJump("v1 == v2: carrier-u speed [g]/[v] undefined")
    f1, g1 = flux(u1, v1)
    f2, g2 = flux(u2, v2)
    c = (g2 - g1) / (v2 - v1)
    amp_rate = c * (u2 - u1) - (f2 - f1)
    return c, amp_rate


def _single_arc_solution(carrier, data, c, amp_rate) -> SingularSolution:
    arc = Arc(x0=float(data.jump_location), speed=float(c),
              amp_rate=float(amp_rate))
    return SingularSolution(
        carrier=carrier,
        background=RiemannBackground(data=data, speed=float(c)),
        graph=ShockGraph(arcs=(arc,)),
    )


def delta_shock_carrier_v(flux: FluxPair, data: RiemannData) -> SingularSolution:
    """Delta-shock with the singular part in v; requires u1 != u2."""
    c, amp_rate = carrier_v_speed_amplitude(flux, data)
    return _single_arc_solution("v", data, c, amp_rate)


def delta_shock_carrier_u(flux: FluxPair, data: RiemannData) -> SingularSolution:
    """Delta-shock with the singular part in u; requires v1 != v2."""
    c, amp_rate = carrier_u_speed_amplitude(flux, data)
    return _single_arc_solution("u", data, c, amp_rate)


def nonuniqueness_pair(beta: float, c1: float, c2: float) -> SingularSolution:
    """Zero-data solution v = beta*delta(x - c1 t) - beta*delta(x - c2 t).

    Valid for arbitrary constants; the two constant amplitudes cancel in
    the initial data, so the weak identities hold for any (beta, c1, c2).
    """
    arcs = (
        Arc(x0=0.0, speed=float(c1), amp0=float(beta), amp_rate=0.0),
        Arc(x0=0.0, speed=float(c2), amp0=-float(beta), amp_rate=0.0),
    )
    return SingularSolution(
        carrier="v",
        background=ConstantBackground(0.0, 0.0),
        graph=ShockGraph(arcs=arcs),
    )
