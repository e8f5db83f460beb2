"""Brio-specific phase-plane machinery.

Characteristic speeds, rarefaction and shock curves, delta-shock
admissibility, the composite Riemann solver for sign-changing v data,
direct delta-joins, and the symmetric-state constructions.

The numeric Hugoniot locus (the quadratic obtained by eliminating the
shock speed from the two Rankine-Hugoniot relations) is the ground
truth for shock curves; the closed-form branch expressions are a
cross-check against it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .core import (
    Arc,
    ElementaryWave,
    FluxPair,
    RiemannData,
    ShockGraph,
    SingularSolution,
    State,
    WaveFan,
    brio_flux,
)
from .errors import DegenerateJump, DomainError, NoBracket, NoIntersection, \
    OrderingViolation, RegimeError
from .gendelta import carrier_u_speed_amplitude, carrier_v_speed_amplitude, \
    delta_shock_carrier_u

__all__ = [
    "char_speed",
    "lambda1",
    "lambda2",
    "WaveCurve",
    "rarefaction_curve",
    "shock_curve",
    "hugoniot_roots",
    "admissible",
    "overcompressive",
    "compressivity_report",
    "vanishing_v_jump_delta",
    "solve_riemann_sign_change",
    "direct_delta_join",
    "direct_join_inequalities",
    "symmetric_carrier_v_delta",
    "three_wave_join",
    "solve_riemann_classical",
    "sample_curve",
]

_FLUX = brio_flux()


def lambda1(u, v):
    return u - 0.5 - np.sqrt(0.25 + np.asarray(v, dtype=float) ** 2)


def lambda2(u, v):
    return u - 0.5 + np.sqrt(0.25 + np.asarray(v, dtype=float) ** 2)


def char_speed(family: int, u, v):
    if family == 1:
        return lambda1(u, v)
    if family == 2:
        return lambda2(u, v)
    raise ValueError(f"family must be 1 or 2, got {family}")


# ---------------------------------------------------------------------------
# wave curves

def _rw1_shape(v):
    s = np.sqrt(4.0 * np.asarray(v, dtype=float) ** 2 + 1.0)
    return -0.5 * (s - np.log(1.0 + s))


def _rw2_shape(v):
    v = np.asarray(v, dtype=float)
    s = np.sqrt(4.0 * v ** 2 + 1.0)
    with np.errstate(divide="ignore"):
        return 0.5 * (s + np.log(s - 1.0))


@dataclass(frozen=True)
class WaveCurve:
    """One-parameter curve v -> u(v) through an anchor state."""

    family: int
    kind: str          # "rarefaction" | "shock"
    anchor: State
    constant: float    # C1/C2 for rarefactions, unused for shocks
    u_at: Callable
    sigma_at: Optional[Callable] = None  # shock speed along a shock curve

    def state_at(self, v) -> State:
        return State(float(self.u_at(v)), float(v))


def rarefaction_curve(family: int, anchor: State) -> WaveCurve:
    """Closed-form rarefaction curve fitted through the anchor.

    The 2-family form diverges logarithmically at v = 0, so evaluation
    is restricted to v with the same strict sign as the anchor.
    """
    if family == 1:
        const = float(anchor.u - _rw1_shape(anchor.v))

        def u_at(v):
            return _rw1_shape(v) + const

        return WaveCurve(1, "rarefaction", anchor, const, u_at)
    if family == 2:
        if anchor.v == 0.0:
            raise DomainError("2-rarefaction curve undefined at v = 0")
        sign = math.copysign(1.0, anchor.v)
        const = float(anchor.u - _rw2_shape(anchor.v))

        def u_at(v):
            v = np.asarray(v, dtype=float)
            if np.any(v * sign <= 0.0):
                raise DomainError(
                    "2-rarefaction curve evaluated across v = 0"
                )
            return _rw2_shape(v) + const

        return WaveCurve(2, "rarefaction", anchor, const, u_at)
    raise ValueError(f"family must be 1 or 2, got {family}")


def hugoniot_roots(anchor: State, v):
    """Both u-roots of the Rankine-Hugoniot locus [f][v] = [g][u] at v.

    Eliminating the speed leaves a quadratic in u; this is the numeric
    ground truth against which the closed-form branches are checked.
    """
    u1, v1 = float(anchor.u), float(anchor.v)
    v = float(v)
    a = -(v + v1) / 2.0
    b = u1 * (v + v1) + (v - v1)
    c0 = (v - v1) * (v * v - v1 * v1 - u1 * u1) / 2.0 - u1 * (v1 * u1 + v - v1)
    if abs(a) < 1e-14:
        if abs(b) < 1e-14:
            raise DomainError("Hugoniot locus degenerate at v = -anchor.v")
        return (-c0 / b,)
    disc = b * b - 4.0 * a * c0
    if disc < 0:
        raise DomainError("no real Hugoniot root")
    sq = math.sqrt(disc)
    return tuple(sorted(((-b - sq) / (2 * a), (-b + sq) / (2 * a))))


def shock_curve(branch: int, anchor: State) -> WaveCurve:
    """Closed-form Hugoniot branch through the anchor (1: minus, 2: plus)."""
    if branch not in (1, 2):
        raise ValueError("branch must be 1 or 2")
    u1, v1 = float(anchor.u), float(anchor.v)
    sign = -1.0 if branch == 1 else 1.0
    f1, g1 = _FLUX(u1, v1)

    def u_at(v):
        v = np.asarray(v, dtype=float)
        if np.any(v == -v1):
            raise DomainError("shock curve undefined at v = -anchor.v")
        return u1 + (v - v1) / (v + v1) * (
            1.0 + sign * np.sqrt((v + v1) ** 2 + 1.0)
        )

    def sigma_at(v):
        v = np.asarray(v, dtype=float)
        u = u_at(v)
        du = u - u1
        dv = v - v1
        f, g = _FLUX(u, v)
        with np.errstate(divide="ignore", invalid="ignore"):
            sig_u = (f - f1) / du
            sig_v = (g - g1) / dv
        return np.where(np.abs(du) > np.abs(dv), sig_u, sig_v)

    return WaveCurve(branch, "shock", anchor, 0.0, u_at, sigma_at)


# ---------------------------------------------------------------------------
# admissibility

def admissible(family: int, left: State, right: State, c: float,
               slack: float = 1e-12) -> bool:
    """Compressivity: lambda_i(right) <= c <= lambda_i(left), non-strict."""
    lo = float(char_speed(family, right.u, right.v))
    hi = float(char_speed(family, left.u, left.v))
    return lo - slack <= c <= hi + slack


def overcompressive(left: State, right: State, c: float,
                    slack: float = 1e-12) -> bool:
    """Both characteristic families impinge on the discontinuity."""
    return admissible(1, left, right, c, slack) and admissible(2, left, right, c, slack)


def compressivity_report(left: State, right: State, c: float):
    """Per-family admissibility with strict/non-strict distinction."""
    report = {}
    for i in (1, 2):
        lo = float(char_speed(i, right.u, right.v))
        hi = float(char_speed(i, left.u, left.v))
        report[i] = {
            "admissible": lo - 1e-12 <= c <= hi + 1e-12,
            "strict": lo < c < hi,
            "lambda_right": lo,
            "lambda_left": hi,
        }
    report["overcompressive"] = report[1]["admissible"] and report[2]["admissible"]
    return report


# ---------------------------------------------------------------------------
# root finding

def bracketed_root(fn, lo: float, hi: float, n_scan: int = 256,
                   tol: float = 1e-12, max_iter: int = 200) -> float:
    """Scan [lo, hi] for a sign change, then bisect with secant refinement."""
    grid = np.linspace(lo, hi, n_scan + 1)
    vals = np.array([fn(g) for g in grid])
    finite = np.isfinite(vals)
    a = b = None
    for k in range(n_scan):
        if not (finite[k] and finite[k + 1]):
            continue
        if vals[k] == 0.0:
            return float(grid[k])
        if vals[k] * vals[k + 1] < 0.0:
            a, b = grid[k], grid[k + 1]
            fa, fb = vals[k], vals[k + 1]
            break
    else:
        if finite[-1] and vals[-1] == 0.0:
            return float(grid[-1])
        raise NoBracket(f"no sign change on [{lo}, {hi}] in {n_scan} cells")
    for _ in range(max_iter):
        if abs(b - a) < tol:
            break
        mid = 0.5 * (a + b)
        if fb != fa:
            sec = b - fb * (b - a) / (fb - fa)
            if a < sec < b:
                mid = sec
        fm = fn(mid)
        if fm == 0.0 or abs(fm) < 1e-300:
            return float(mid)
        if fa * fm < 0.0:
            b, fb = mid, fm
        else:
            a, fa = mid, fm
    return float(0.5 * (a + b))


# ---------------------------------------------------------------------------
# constructions

def vanishing_v_jump_delta(u_tilde: float, v2: float) -> SingularSolution:
    """Carrier-u delta-shock for data (u~, 0) -> (u~, v2), v2 < 0.

    Speed u~ - 1 and amplitude rate -v2^2/2; always 1-admissible.
    """
    if not v2 < 0:
        raise RegimeError("vanishing_v_jump_delta requires v2 < 0")
    data = RiemannData(State(u_tilde, 0.0), State(u_tilde, v2))
    sol = delta_shock_carrier_u(_FLUX, data)
    arc = sol.graph.arcs[0]
    assert admissible(1, data.left, data.right, arc.speed)
    return sol


def _backward_2_curve(right: State):
    """Left states reachable by a 2-wave to ``right``: rarefaction branch
    for lambda_2 decreasing toward the middle, shock branch otherwise."""
    rw = rarefaction_curve(2, right) if right.v != 0.0 else None
    sw = shock_curve(2, right)
    lam_r = float(lambda2(right.u, right.v))

    def u_at(v):
        if rw is not None and v * right.v > 0.0:
            u = float(rw.u_at(v))
            if float(lambda2(u, v)) <= lam_r + 1e-12:
                return u
        return float(sw.u_at(v))

    return u_at


def _forward_1_curve(left: State):
    """Middle states reachable from ``left`` by a 1-wave."""
    rw = rarefaction_curve(1, left)
    sw = shock_curve(1, left)
    lam_l = float(lambda1(left.u, left.v))

    def u_at(v):
        u = float(rw.u_at(v))
        if float(lambda1(u, v)) >= lam_l - 1e-12:
            return u
        return float(sw.u_at(v))

    return u_at


def _one_wave(family: int, left: State, right: State) -> ElementaryWave:
    """Classify the connection left -> right as shock or rarefaction."""
    lam_l = float(char_speed(family, left.u, left.v))
    lam_r = float(char_speed(family, right.u, right.v))
    if lam_r >= lam_l - 1e-12:
        return ElementaryWave(
            kind="rarefaction", family=family, left=left, right=right,
            speed_range=(lam_l, max(lam_l, lam_r)),
        )
    du = right.u - left.u
    dv = right.v - left.v
    f1, g1 = _FLUX(left.u, left.v)
    f2, g2 = _FLUX(right.u, right.v)
    sigma = (f2 - f1) / du if abs(du) > abs(dv) else (g2 - g1) / dv
    return ElementaryWave(kind="shock", family=family, left=left, right=right,
                          speed=float(sigma))


def solve_riemann_sign_change(left: State, right: State,
                              v_floor: float = -8.0) -> WaveFan:
    """Composite solver for v2 < 0 < v1.

    Fan: 1-rarefaction from the left state down to v = 0, a carrier-u
    delta-shock at speed u_m - 1 to (u_m, v_m), then a 2-wave to the
    right state.  Zero-strength pieces are dropped.
    """
    if not (right.v < 0.0 < left.v):
        raise RegimeError("solver requires v2 < 0 < v1")
    rw1 = rarefaction_curve(1, left)
    u_m = float(rw1.u_at(0.0))
    mid_top = State(u_m, 0.0)

    back2 = _backward_2_curve(right)
    lo = min(v_floor, 2.0 * right.v)
    v_m = bracketed_root(lambda v: back2(v) - u_m, lo, -1e-9)
    mid_bot = State(u_m, float(v_m))

    waves = []
    if abs(left.v) > 1e-12 or abs(left.u - u_m) > 1e-12:
        waves.append(ElementaryWave(
            kind="rarefaction", family=1, left=left, right=mid_top,
            speed_range=(float(lambda1(left.u, left.v)), u_m - 1.0),
        ))
    if abs(v_m) > 1e-12:
        c, rate = carrier_u_speed_amplitude(
            _FLUX, RiemannData(mid_top, mid_bot)
        )
        delta = ElementaryWave(
            kind="delta", family=1, left=mid_top, right=mid_bot,
            speed=float(c), carrier="u", amp_rate=float(rate),
        )
        if not admissible(1, mid_top, mid_bot, delta.speed):
            raise OrderingViolation("delta component fails 1-admissibility")
        waves.append(delta)
    if abs(right.v - v_m) > 1e-12 or abs(right.u - u_m) > 1e-12:
        waves.append(_one_wave(2, mid_bot, right))
    fan = WaveFan(tuple(waves))
    fan.validate(_FLUX, RiemannData(left, right))
    return fan


def direct_join_inequalities(left: State, right: State):
    """The two algebraic compressivity inequalities for a direct 1-join."""
    if left.v == right.v:
        raise DegenerateJump("v1 == v2")
    ratio = (right.u - left.u) / (right.v - left.v)
    lhs1 = left.v * ratio
    rhs1 = 0.5 - math.sqrt(0.25 + right.v ** 2)
    lhs2 = right.v * ratio
    rhs2 = 0.5 - math.sqrt(0.25 + left.v ** 2)
    return (lhs1 >= rhs1 - 1e-12, lhs2 <= rhs2 + 1e-12, (lhs1, rhs1, lhs2, rhs2))


def direct_delta_join(left: State, right: State):
    """Carrier-u delta-shock joining the states directly, if 1-admissible.

    Returns (spec_or_None, inequality_report); the lambda-form check and
    the algebraic inequalities must agree.
    """
    from .gendelta import DeltaShockSpec

    data = RiemannData(left, right)
    c, rate = carrier_u_speed_amplitude(_FLUX, data)
    ok_lambda = admissible(1, left, right, float(c))
    ineq1, ineq2, values = direct_join_inequalities(left, right)
    spec = None
    if ok_lambda:
        spec = DeltaShockSpec(carrier="u", speed=float(c),
                              amp_rate=float(rate), data=data)
    return spec, {
        "lambda_form": ok_lambda,
        "inequality_1": ineq1,
        "inequality_2": ineq2,
        "values": values,
    }


def symmetric_carrier_v_delta(u: float, v_bar: float, family: int) -> SingularSolution:
    """Carrier-v delta-shock between (u, v_bar) and (u, -v_bar).

    The characteristic speeds coincide on both sides, so the shock moves
    at lambda_i and is i-admissible (with equalities); the amplitude
    rate follows from the second weak identity at that speed.
    """
    left = State(u, v_bar)
    right = State(u, -v_bar)
    c = float(char_speed(family, u, v_bar))
    g1 = _FLUX.g(left.u, left.v)
    g2 = _FLUX.g(right.u, right.v)
    rate = c * (right.v - left.v) - (g2 - g1)
    data = RiemannData(left, right)
    from .core import RiemannBackground

    return SingularSolution(
        carrier="v",
        background=RiemannBackground(data=data, speed=c),
        graph=ShockGraph(arcs=(Arc(x0=0.0, speed=c, amp_rate=float(rate)),)),
    )


_PROCEDURES = {
    "RW1-d-RW2": ("rarefaction", "rarefaction", 1),
    "SW1-d-RW2": ("shock", "rarefaction", 2),
    "RW1-d-SW2": ("rarefaction", "shock", 1),
}


def three_wave_join(left: State, right: State, procedure: str,
                  speed_choice: Optional[int] = None,
                  v_max: float = 8.0) -> WaveFan:
    """Carrier-v delta constructions through v-symmetric middle states.

    Connects left -> (u_m, v_m) by a 1-wave, (u_m, v_m) -> (u_m, -v_m)
    by a carrier-v delta-shock at speed lambda_i(u_m, v_m), then a
    2-wave to the right state.  Defined for u2 > u1 only.
    """
    if procedure not in _PROCEDURES:
        raise ValueError(f"unknown procedure {procedure!r}; "
                         f"choose from {sorted(_PROCEDURES)}")
    if not right.u > left.u:
        raise RegimeError("three-wave constructions require u2 > u1")
    kind1, kind2, default_family = _PROCEDURES[procedure]
    family = default_family if speed_choice is None else speed_choice
    if family not in (1, 2):
        raise ValueError("speed_choice must be 1 or 2")

    # the Hugoniot locus through an anchor has two algebraic branches
    # and either may hold the requested wave; try both where relevant
    if kind1 == "rarefaction":
        cands1 = [rarefaction_curve(1, left)]
    else:
        cands1 = [shock_curve(1, left), shock_curve(2, left)]
    if kind2 == "rarefaction":
        cands2 = [rarefaction_curve(2, right)]
    else:
        cands2 = [shock_curve(1, right), shock_curve(2, right)]

    last_exc = None
    for curve1 in cands1:
        for curve2 in cands2:
            def gap(v):
                try:
                    return float(curve1.u_at(v)) - float(curve2.u_at(-v))
                except DomainError:
                    return math.nan

            try:
                v_m = bracketed_root(gap, 1e-9, v_max)
                fan = _assemble_three_wave_fan(
                    left, right, curve1, v_m, kind1, kind2, family)
                fan.validate(_FLUX, RiemannData(left, right))
                return fan
            except (NoBracket, OrderingViolation, ValueError,
                    DomainError) as exc:
                last_exc = exc
    raise NoIntersection(
        f"no valid {procedure} connection found"
    ) from last_exc


def _forced_wave(kind: str, family: int, left: State,
                 right: State) -> ElementaryWave:
    """Build the requested elementary wave and insist on admissibility."""
    lam_l = float(char_speed(family, left.u, left.v))
    lam_r = float(char_speed(family, right.u, right.v))
    if kind == "rarefaction":
        if lam_r < lam_l - 1e-10:
            raise OrderingViolation(
                f"{family}-rarefaction requested but speed decreases")
        return ElementaryWave(kind="rarefaction", family=family, left=left,
                              right=right, speed_range=(lam_l, lam_r))
    du = right.u - left.u
    dv = right.v - left.v
    f1, g1 = _FLUX(left.u, left.v)
    f2, g2 = _FLUX(right.u, right.v)
    sigma = (f2 - f1) / du if abs(du) > abs(dv) else (g2 - g1) / dv
    if not (lam_r - 1e-10 <= sigma <= lam_l + 1e-10):
        raise OrderingViolation(
            f"{family}-shock requested but speed is not compressive")
    return ElementaryWave(kind="shock", family=family, left=left, right=right,
                          speed=float(sigma))


def _assemble_three_wave_fan(left, right, curve1, v_m, kind1, kind2, family):
    u_m = float(curve1.u_at(v_m))
    mid_l = State(u_m, float(v_m))
    mid_r = State(u_m, -float(v_m))
    c = float(char_speed(family, u_m, v_m))
    g1 = _FLUX.g(mid_l.u, mid_l.v)
    g2 = _FLUX.g(mid_r.u, mid_r.v)
    rate = c * (mid_r.v - mid_l.v) - (g2 - g1)

    waves = []
    if left != mid_l:
        waves.append(_forced_wave(kind1, 1, left, mid_l))
    waves.append(ElementaryWave(
        kind="delta", family=family, left=mid_l, right=mid_r,
        speed=c, carrier="v", amp_rate=float(rate),
    ))
    if right != mid_r:
        waves.append(_forced_wave(kind2, 2, mid_r, right))
    return WaveFan(tuple(waves))


def solve_riemann_classical(left: State, right: State) -> WaveFan:
    """Two-wave Lax solution for same-sign v data (small amplitude)."""
    if left == right:
        return WaveFan(tuple())
    if left.v * right.v <= 0.0:
        raise RegimeError("classical solver requires v1, v2 of one strict sign")
    fwd = _forward_1_curve(left)
    back = _backward_2_curve(right)
    sign = math.copysign(1.0, left.v)
    v_lo = 1e-9 * sign
    v_hi = sign * 4.0 * max(abs(left.v), abs(right.v), 0.5)
    lo, hi = (min(v_lo, v_hi), max(v_lo, v_hi))
    try:
        v_mid = bracketed_root(lambda v: fwd(v) - back(v), lo, hi)
    except NoBracket as exc:
        raise NoIntersection(
            "forward 1-curve and backward 2-curve do not meet in the "
            "same-sign region"
        ) from exc
    mid = State(float(fwd(v_mid)), float(v_mid))
    waves = []
    if mid != left:
        waves.append(_one_wave(1, left, mid))
    if mid != right:
        waves.append(_one_wave(2, mid, right))
    fan = WaveFan(tuple(waves))
    if waves:
        fan.validate(_FLUX, RiemannData(left, right))
    return fan


def sample_curve(curve: WaveCurve, v_values: Sequence[float]):
    """Sample (v, u, lambda_family, sigma) rows for phase-plane export."""
    rows = []
    for v in v_values:
        try:
            u = float(curve.u_at(v))
        except DomainError:
            continue
        lam = float(char_speed(curve.family, u, v))
        sigma = float(curve.sigma_at(v)) if curve.sigma_at is not None else math.nan
        rows.append((float(v), u, lam, sigma))
    return rows
