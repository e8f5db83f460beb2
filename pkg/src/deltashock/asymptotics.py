"""Complex-valued smooth approximating families for delta-shocks.

Each family is a pair of smooth functions (u_eps, v_eps) built from a
traveling smooth step profile plus singular blocks concentrated around
x = c*t: a two-bump delta regularization, an imaginary odd bump pair
whose square cancels the delta square in the flux, and (for the
u-carrier variant) a square-root bump whose square supplies the
transport term.  Equation residuals, paired against space test
functions at fixed times, decay with eps; the distributional limits are
the corresponding delta-shock solutions.

Mass normalization: the two-bump delta block carries total mass 2, so
a family targeting singular mass A(t) uses the internal coefficient
a(t) = A(t)/2.  The square-root block coefficient is sqrt(2*c*A(t))
(principal branch) -- purely imaginary when 2*c*A(t) < 0, which is
where complex-valued corrections become essential.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .core import (
    Mollifier,
    RiemannData,
    SingularSolution,
    SpaceTestFunction,
    State,
    bump_space_test_function,
    brio_flux,
    canonical_mollifier,
)
from .errors import DegenerateJump, DomainError
from .gendelta import carrier_u_speed_amplitude, carrier_v_speed_amplitude

__all__ = [
    "AsymptoticFamily",
    "build_family_a",
    "build_family_b",
    "build_family_symmetric",
    "residual_pairing",
    "decay_report",
    "DecayReport",
    "weak_limit_check",
    "WeakLimitReport",
    "amplitude_arbiter",
    "ArbiterReport",
    "standard_space_battery",
    "default_eps_grid",
]

_FLUX = brio_flux()
_SLOPE_PASS = 0.9
_NOISE_FACTOR = 1.5  # allowed non-monotonicity between consecutive eps
# pairings below this sit at the quadrature noise floor (~1e-10) and are
# treated as exactly zero rather than fitted for a slope
_ZERO_LEVEL = 1e-9


# ---------------------------------------------------------------------------
# building blocks (functions of xi = x - c*t)

@dataclass(frozen=True)
class _StepProfile:
    """Smooth traveling step: left constant below -20*eps, plateau on
    |xi| < 10*eps, right constant above 20*eps, integrated-bump ramps."""

    rho: Mollifier
    left: float
    plateau: float
    right: float
    eps: float

    def __call__(self, xi):
        xi = np.asarray(xi, dtype=float)
        e = self.eps
        s_in = self.rho.smooth_step((xi + 20.0 * e) / (10.0 * e))
        s_out = self.rho.smooth_step((xi - 10.0 * e) / (10.0 * e))
        return (self.left + (self.plateau - self.left) * s_in
                + (self.right - self.plateau) * s_out)

    def prime(self, xi):
        xi = np.asarray(xi, dtype=float)
        e = self.eps
        d_in = self.rho.smooth_step_prime((xi + 20.0 * e) / (10.0 * e))
        d_out = self.rho.smooth_step_prime((xi - 10.0 * e) / (10.0 * e))
        return ((self.plateau - self.left) * d_in
                + (self.right - self.plateau) * d_out) / (10.0 * e)


def _delta_block(rho: Mollifier, eps: float):
    """Two unit bumps at xi = +-4*eps; total mass 2."""

    def val(xi):
        z = np.asarray(xi, dtype=float) / eps
        return (rho(z - 4.0) + rho(z + 4.0)) / eps

    def prime(xi):
        z = np.asarray(xi, dtype=float) / eps
        return (rho.prime(z - 4.0) + rho.prime(z + 4.0)) / eps ** 2

    return val, prime


def _odd_pair_block(rho: Mollifier, eps: float):
    """Imaginary odd bump pair at xi = +-2*eps; zero mass."""

    def val(xi):
        z = np.asarray(xi, dtype=float) / eps
        return 1j * (rho(z - 2.0) - rho(z + 2.0)) / eps

    def prime(xi):
        z = np.asarray(xi, dtype=float) / eps
        return 1j * (rho.prime(z - 2.0) - rho.prime(z + 2.0)) / eps ** 2

    return val, prime


def _sqrt_block(rho: Mollifier, eps: float):
    """Centered square-root bump; its square is a unit-mass bump."""

    def val(xi):
        z = np.asarray(xi, dtype=float) / eps
        return rho.sqrt(z) / math.sqrt(eps)

    def prime(xi):
        z = np.asarray(xi, dtype=float) / eps
        return rho.sqrt_prime(z) / eps ** 1.5

    return val, prime


@dataclass(frozen=True)
class _Component:
    """One unknown: traveling profile plus coefficient-weighted blocks.

    blocks: tuples (coef(t), coef_rate(t), B(xi), B'(xi)); the component
    value is P(xi) + sum coef_k(t) * B_k(xi).
    """

    profile: _StepProfile
    blocks: tuple = ()

    def value(self, xi, t):
        out = self.profile(xi).astype(complex)
        for coef, _, block, _ in self.blocks:
            out = out + coef(t) * block(xi)
        return out

    def d_x(self, xi, t):
        out = self.profile.prime(xi).astype(complex)
        for coef, _, _, block_p in self.blocks:
            out = out + coef(t) * block_p(xi)
        return out

    def d_t(self, xi, t, c):
        # every block travels with speed c: d/dt = -c d/dx + coefficient rate
        out = -c * self.d_x(xi, t)
        for _, rate, block, _ in self.blocks:
            out = out + rate(t) * block(xi)
        return out


@dataclass(frozen=True)
class AsymptoticFamily:
    """Smooth complex family (u_eps, v_eps) approximating a delta-shock.

    ``amp_rate`` is the target singular mass rate A'(t); the internal
    delta-block coefficient is A(t)/2 (the block carries mass 2).
    """

    variant: str           # "A" | "B" | "symmetric"
    data: RiemannData
    c: float
    amp_rate: float
    eps: float
    rho: Mollifier
    u_comp: _Component = field(repr=False)
    v_comp: _Component = field(repr=False)

    def _xi(self, x, t):
        return np.asarray(x, dtype=float) - self.c * float(t)

    def u(self, x, t):
        return self.u_comp.value(self._xi(x, t), float(t))

    def v(self, x, t):
        return self.v_comp.value(self._xi(x, t), float(t))

    def u_x(self, x, t):
        return self.u_comp.d_x(self._xi(x, t), float(t))

    def v_x(self, x, t):
        return self.v_comp.d_x(self._xi(x, t), float(t))

    def u_t(self, x, t):
        return self.u_comp.d_t(self._xi(x, t), float(t), self.c)

    def v_t(self, x, t):
        return self.v_comp.d_t(self._xi(x, t), float(t), self.c)

    def singular_mass(self, t):
        """Target Dirac mass A(t) carried at x = c*t in the limit."""
        return self.amp_rate * float(t)


def _zero_rate(_t):
    return 0.0


def build_family_a(data: RiemannData, eps: float,
                   amp_rate: Optional[float] = None,
                   speed: Optional[float] = None,
                   rho: Optional[Mollifier] = None) -> AsymptoticFamily:
    """v-carrier family: u_eps = U_eps, v_eps = V_eps + a(t)(delta + R).

    The u-profile plateau is c+1 so that the flux cross term U*v feeds
    the delta transport; requires u1 != u2 unless both speed and
    amp_rate are supplied (the arbitrary-speed symmetric case).
    """
    rho = rho or canonical_mollifier()
    if speed is None or amp_rate is None:
        c_rh, rate_rh = carrier_v_speed_amplitude(_FLUX, data)
        c = float(c_rh) if speed is None else float(speed)
        amp_rate = float(rate_rh) if amp_rate is None else float(amp_rate)
    else:
        c = float(speed)
        amp_rate = float(amp_rate)

    u_prof = _StepProfile(rho, float(data.left.u), c + 1.0,
                          float(data.right.u), eps)
    v_prof = _StepProfile(rho, float(data.left.v), 0.0,
                          float(data.right.v), eps)
    d_val, d_prime = _delta_block(rho, eps)
    r_val, r_prime = _odd_pair_block(rho, eps)

    half = 0.5 * amp_rate

    def a_coef(t):
        return half * t

    def a_rate(_t):
        return half

    v_comp = _Component(v_prof, (
        (a_coef, a_rate, d_val, d_prime),
        (a_coef, a_rate, r_val, r_prime),
    ))
    return AsymptoticFamily(
        variant="A", data=data, c=c, amp_rate=float(amp_rate), eps=eps,
        rho=rho, u_comp=_Component(u_prof), v_comp=v_comp,
    )


def build_family_b(data: RiemannData, eps: float,
                   amp_rate: Optional[float] = None,
                   rho: Optional[Mollifier] = None) -> AsymptoticFamily:
    """u-carrier family with the square-root correction.

    u_eps = U_eps + a(t)(delta + R1) + b(t) R2 with b(t) = sqrt(2cA(t))
    on the principal branch; both profiles plateau at 0.  Requires
    v1 != v2.
    """
    rho = rho or canonical_mollifier()
    c_rh, rate_rh = carrier_u_speed_amplitude(_FLUX, data)
    c = float(c_rh)
    if amp_rate is None:
        amp_rate = float(rate_rh)

    u_prof = _StepProfile(rho, float(data.left.u), 0.0,
                          float(data.right.u), eps)
    v_prof = _StepProfile(rho, float(data.left.v), 0.0,
                          float(data.right.v), eps)
    d_val, d_prime = _delta_block(rho, eps)
    r1_val, r1_prime = _odd_pair_block(rho, eps)
    r2_val, r2_prime = _sqrt_block(rho, eps)

    half = 0.5 * amp_rate
    gamma = 2.0 * c * amp_rate  # b(t)^2 = gamma * t

    def a_coef(t):
        return half * t

    def a_rate(_t):
        return half

    def b_coef(t):
        return cmath.sqrt(complex(gamma * t))

    def b_rate(t):
        # 2 b b' = gamma; singular like 1/sqrt(t) at t = 0
        b = b_coef(t)
        if b == 0:
            if gamma == 0.0:
                return 0.0
            raise DomainError("square-root coefficient rate undefined at t=0")
        return 0.5 * gamma / b

    u_comp = _Component(u_prof, (
        (a_coef, a_rate, d_val, d_prime),
        (a_coef, a_rate, r1_val, r1_prime),
        (b_coef, b_rate, r2_val, r2_prime),
    ))
    return AsymptoticFamily(
        variant="B", data=data, c=c, amp_rate=float(amp_rate), eps=eps,
        rho=rho, u_comp=u_comp, v_comp=_Component(v_prof),
    )


def build_family_symmetric(u: float, v_bar: float, c: float, eps: float,
                           rho: Optional[Mollifier] = None) -> AsymptoticFamily:
    """v-carrier family for symmetric data (u, v_bar) -> (u, -v_bar).

    The first-equation jump terms vanish ([u] = [u^2+v^2] = 0), so any
    speed c works; the amplitude rate follows from the second equation
    at that speed.
    """
    data = RiemannData(State(u, v_bar), State(u, -v_bar))
    g1 = _FLUX.g(data.left.u, data.left.v)
    g2 = _FLUX.g(data.right.u, data.right.v)
    amp_rate = c * (data.right.v - data.left.v) - (g2 - g1)
    fam = build_family_a(data, eps, amp_rate=float(amp_rate), speed=float(c),
                         rho=rho)
    return AsymptoticFamily(
        variant="symmetric", data=fam.data, c=fam.c, amp_rate=fam.amp_rate,
        eps=fam.eps, rho=fam.rho, u_comp=fam.u_comp, v_comp=fam.v_comp,
    )


# ---------------------------------------------------------------------------
# pairings

_GL8 = np.polynomial.legendre.leggauss(8)
_GL12 = np.polynomial.legendre.leggauss(12)


def _panels(breaks, max_width):
    edges = []
    for a, b in zip(breaks[:-1], breaks[1:]):
        n = max(1, int(math.ceil((b - a) / max_width)))
        edges.append(np.linspace(a, b, n + 1)[:-1])
    edges.append(np.array([breaks[-1]]))
    return np.concatenate(edges)


def _integrate(fn, breaks, fine_lo, fine_hi, fine_width, coarse_width):
    """Complex integral of fn over [breaks[0], breaks[-1]] with fine
    panels on [fine_lo, fine_hi] and coarse panels elsewhere."""
    total = 0.0 + 0.0j
    pts = sorted(set(list(breaks) + [fine_lo, fine_hi]))
    pts = [p for p in pts if breaks[0] <= p <= breaks[-1]]
    for a, b in zip(pts[:-1], pts[1:]):
        if b <= a:
            continue
        fine = a >= fine_lo - 1e-300 and b <= fine_hi + 1e-300
        width = fine_width if fine else coarse_width
        nodes, weights = _GL8 if fine else _GL12
        edges = np.linspace(a, b, max(1, int(math.ceil((b - a) / width))) + 1)
        mid = 0.5 * (edges[:-1] + edges[1:])
        half = 0.5 * np.diff(edges)
        x = mid[:, None] + half[:, None] * nodes[None, :]
        vals = fn(x.ravel()).reshape(x.shape)
        total += np.sum(half[:, None] * weights[None, :] * vals)
    return complex(total)


def residual_pairing(fam: AsymptoticFamily, eq: int,
                     phi: SpaceTestFunction, t: float) -> complex:
    """<d/dt w_eps + d/dx F(u_eps, v_eps), phi> at fixed t.

    Evaluated as int (d/dt w_eps) phi dx - int F(u_eps, v_eps) phi' dx
    with quadrature split on the concentration bands around x = c*t.
    """
    if eq not in (1, 2):
        raise ValueError("eq must be 1 or 2")
    c, e = fam.c, fam.eps
    center = c * float(t)
    xa, xb = phi.support
    if xb <= xa:
        return 0.0 + 0.0j
    bands = [center + k * e for k in
             (-30.0, -20.0, -10.0, -5.0, -3.0, -1.0, 0.0,
              1.0, 3.0, 5.0, 10.0, 20.0, 30.0)]
    breaks = sorted({xa, xb} | {b for b in bands if xa < b < xb})

    if eq == 1:
        def integrand(x):
            u = fam.u(x, t)
            v = fam.v(x, t)
            return fam.u_t(x, t) * phi.phi(x) - _FLUX.f(u, v) * phi.phi_x(x)
    else:
        def integrand(x):
            u = fam.u(x, t)
            v = fam.v(x, t)
            return fam.v_t(x, t) * phi.phi(x) - _FLUX.g(u, v) * phi.phi_x(x)

    return _integrate(integrand, breaks, center - 30.0 * e, center + 30.0 * e,
                      fine_width=e / 4.0, coarse_width=(xb - xa) / 24.0)


def standard_space_battery(speeds: Sequence[float], horizon: float = 1.0):
    """Space test functions covering the traveling concentration point."""
    speeds = [float(s) for s in speeds] or [0.0]
    lo = min(speeds) * horizon
    hi = max(speeds) * horizon
    mid = 0.5 * (lo + hi)
    spread = max(1.0, 0.75 * (hi - lo))
    battery = []
    # radii keep the 30*eps concentration band inside the support for
    # every center c*t, t <= horizon, up to eps = 2^-4
    for k, (x0, r) in enumerate([
        (mid, spread + 3.0),
        (mid - 0.5 * spread, 1.5 * spread + 2.5),
        (mid + 0.5 * spread, 1.5 * spread + 2.5),
        (mid, 2.5 * spread + 3.0),
    ]):
        battery.append(bump_space_test_function(x0, r, label=f"sphi{k:02d}"))
    return battery


def default_eps_grid(k_lo: int = 4, k_hi: int = 12):
    return [2.0 ** (-k) for k in range(k_lo, k_hi + 1)]


def _fit_slope(eps_grid, mags):
    """Least-squares slope of log|pairing| vs log eps; inf if all zero."""
    eps_arr = np.asarray(eps_grid, dtype=float)
    m = np.asarray(mags, dtype=float)
    if np.all(m < _ZERO_LEVEL):
        return math.inf, -math.inf
    m = np.maximum(m, 1e-300)
    slope, intercept = np.polyfit(np.log(eps_arr), np.log(m), 1)
    return float(slope), float(intercept)


@dataclass(frozen=True)
class DecayReport:
    """Sup-over-t residual magnitudes per (equation, test function)."""

    variant: str
    eps_grid: tuple
    rows: tuple  # (eq, phi_id, mags tuple, slope, intercept, passed)

    @property
    def passed(self):
        return all(r[5] for r in self.rows)

    def worst_slope(self):
        return min((r[3] for r in self.rows), default=math.inf)

    def to_csv(self, path):
        from .cli import write_csv

        header = ["variant", "eq", "phi_id", "eps", "sup_t_abs_pairing",
                  "slope"]
        out = []
        for eq, pid, mags, slope, _b, _p in self.rows:
            for e, m in zip(self.eps_grid, mags):
                out.append((self.variant, eq, pid, e, m, slope))
        write_csv(path, header, out)


def decay_report(builder: Callable[[float], AsymptoticFamily],
                 battery: Sequence[SpaceTestFunction],
                 eps_grid: Sequence[float],
                 horizon: float = 1.0, nt: int = 64,
                 equations=(1, 2)) -> DecayReport:
    """Residual decay measurement over a dyadic eps grid.

    For each equation and test function, the pairing magnitude is
    maximized over the uniform t grid j*horizon/nt, j = 1..nt (t = 0 is
    excluded: the square-root coefficient rate is singular there), and
    the log-log slope is fitted.  A row passes if the slope is >= 0.9
    and the magnitudes are monotone within noise.
    """
    eps_grid = list(eps_grid)
    if len(eps_grid) < 2:
        raise ValueError("need at least two eps values to fit a slope")
    if any(b >= a for a, b in zip(eps_grid[:-1], eps_grid[1:])):
        raise ValueError("eps grid must be strictly decreasing")
    times = [j * horizon / nt for j in range(1, nt + 1)]
    fams = [builder(e) for e in eps_grid]
    variant = fams[0].variant
    rows = []
    for eq in equations:
        for phi in battery:
            mags = []
            for fam in fams:
                sup = max(abs(residual_pairing(fam, eq, phi, t))
                          for t in times)
                mags.append(sup)
            slope, intercept = _fit_slope(eps_grid, mags)
            monotone = all(
                b <= _NOISE_FACTOR * a + _ZERO_LEVEL
                for a, b in zip(mags[:-1], mags[1:])
            )
            passed = slope >= _SLOPE_PASS and monotone
            rows.append((eq, phi.label, tuple(mags), slope, intercept, passed))
    return DecayReport(variant=variant, eps_grid=tuple(eps_grid),
                       rows=tuple(rows))


# ---------------------------------------------------------------------------
# weak limits

def _target_pairing(target: SingularSolution, component: str,
                    phi: SpaceTestFunction, t: float) -> float:
    """<limit distribution, phi> at time t for one unknown."""
    xa, xb = phi.support
    lines = sorted({xa, xb} | {
        x0 + s * t for (x0, s) in target.background.lines() if
        xa < x0 + s * t < xb
    })
    total = 0.0
    nodes, weights = _GL12
    for a, b in zip(lines[:-1], lines[1:]):
        edges = np.linspace(a, b, 25)
        mid = 0.5 * (edges[:-1] + edges[1:])
        half = 0.5 * np.diff(edges)
        x = mid[:, None] + half[:, None] * nodes[None, :]
        u, v = target.background.state(x, np.full_like(x, t))
        w = u if component == "u" else v
        total += float(np.sum(half[:, None] * weights[None, :]
                              * w * phi.phi(x)))
    carries = (target.carrier == component or target.carrier == "both")
    if carries:
        graph = target.graph if component == "u" or target.carrier != "both" \
            else target.graph
        for arc in graph.arcs:
            if t >= arc.t0:
                total += float(arc.amplitude(t)) * float(phi.phi(arc.x(t)))
    return total


@dataclass(frozen=True)
class WeakLimitReport:
    eps_grid: tuple
    rows: tuple   # (component, phi_id, t, errors tuple, imag tuple)
    error_slope: float
    imag_slope: float

    @property
    def passed(self):
        return self.error_slope >= _SLOPE_PASS and (
            self.imag_slope >= _SLOPE_PASS or math.isinf(self.imag_slope)
        )


def weak_limit_check(builder: Callable[[float], AsymptoticFamily],
                     target: SingularSolution,
                     battery: Sequence[SpaceTestFunction],
                     eps_grid: Sequence[float],
                     times=(0.25, 0.5, 1.0)) -> WeakLimitReport:
    """Distributional convergence of the family to the target solution.

    Reports |<w_eps, phi> - <w, phi>| and |Im <w_eps, phi>| per eps,
    with fitted decay slopes over the worst (component, phi, t) case.
    """
    eps_grid = list(eps_grid)
    fams = [builder(e) for e in eps_grid]
    rows = []
    worst_err = np.zeros(len(eps_grid))
    worst_imag = np.zeros(len(eps_grid))
    for component in ("u", "v"):
        for phi in battery:
            for t in times:
                tgt = _target_pairing(target, component, phi, t)
                errs, imags = [], []
                for fam in fams:
                    w = fam.u if component == "u" else fam.v
                    center = fam.c * t
                    breaks = sorted({phi.support[0], phi.support[1]} | {
                        center + k * fam.eps
                        for k in (-30, -20, -10, -5, -3, -1, 0,
                                  1, 3, 5, 10, 20, 30)
                        if phi.support[0] < center + k * fam.eps
                        < phi.support[1]
                    })
                    val = _integrate(
                        lambda x: w(x, t) * phi.phi(x), breaks,
                        center - 30 * fam.eps, center + 30 * fam.eps,
                        fine_width=fam.eps / 4.0,
                        coarse_width=(phi.support[1] - phi.support[0]) / 24.0,
                    )
                    errs.append(abs(val.real - tgt))
                    imags.append(abs(val.imag))
                rows.append((component, phi.label, t, tuple(errs),
                             tuple(imags)))
                worst_err = np.maximum(worst_err, errs)
                worst_imag = np.maximum(worst_imag, imags)
    err_slope, _ = _fit_slope(eps_grid, worst_err)
    imag_slope, _ = _fit_slope(eps_grid, worst_imag)
    return WeakLimitReport(eps_grid=tuple(eps_grid), rows=tuple(rows),
                           error_slope=err_slope, imag_slope=imag_slope)


# ---------------------------------------------------------------------------
# amplitude arbiter

@dataclass(frozen=True)
class ArbiterReport:
    """Second-equation residual series under the two candidate
    amplitudes for the v-carrier family.

    ``full_mags`` uses the jump-relation rate c[V]-[g] as the singular
    mass; ``half_mags`` uses half of it.  The construction itself
    decides: only one choice can make the residual decay.
    """

    eps_grid: tuple
    full_rate: float
    half_rate: float
    full_mags: tuple
    half_mags: tuple
    full_slope: float
    half_slope: float
    half_floor: float

    @property
    def full_wins(self):
        # full amplitude: residual decays; half amplitude: residual is
        # bounded below, so it stays far above the decayed full series
        return (self.full_slope >= _SLOPE_PASS
                and self.half_slope < 0.2
                and self.half_floor > 10.0 * min(self.full_mags))

    def lines(self):
        out = [
            "amplitude arbiter: second-equation residual, v-carrier family",
            f"  candidate masses: full rate {self.full_rate:.12g}, "
            f"half rate {self.half_rate:.12g}",
            "  eps        |pairing| full-amplitude   |pairing| half-amplitude",
        ]
        for e, a, b in zip(self.eps_grid, self.full_mags, self.half_mags):
            out.append(f"  {e:<10.4e} {a:<26.6e} {b:.6e}")
        out.append(f"  fitted slopes: full {self.full_slope:.3f}, "
                   f"half {self.half_slope:.3f}; half-amplitude floor "
                   f"{self.half_floor:.6e}")
        out.append("  verdict: " + (
            "full (jump-relation) amplitude wins" if self.full_wins
            else "full amplitude does NOT clearly win -- inspect series"))
        return out


def amplitude_arbiter(data: RiemannData, eps_grid: Sequence[float],
                      phi: Optional[SpaceTestFunction] = None,
                      horizon: float = 1.0, nt: int = 16) -> ArbiterReport:
    """Settle the v-carrier limit amplitude by experiment.

    Builds the variant-A family twice -- once with the jump-relation
    singular mass rate c[V]-[g], once with half of it -- and measures
    the second-equation residual across eps.  The wrong amplitude
    leaves an O(1) defect on the shock line.
    """
    c_rh, rate_rh = carrier_v_speed_amplitude(_FLUX, data)
    full_rate = float(rate_rh)
    half_rate = 0.5 * full_rate
    if phi is None:
        phi = standard_space_battery([float(c_rh)], horizon)[0]
    times = [j * horizon / nt for j in range(1, nt + 1)]
    full_mags, half_mags = [], []
    for e in eps_grid:
        fam_full = build_family_a(data, e)
        fam_half = build_family_a(data, e, amp_rate=half_rate)
        full_mags.append(max(abs(residual_pairing(fam_full, 2, phi, t))
                             for t in times))
        half_mags.append(max(abs(residual_pairing(fam_half, 2, phi, t))
                             for t in times))
    full_slope, _ = _fit_slope(eps_grid, full_mags)
    half_slope, _ = _fit_slope(eps_grid, half_mags)
    return ArbiterReport(
        eps_grid=tuple(eps_grid), full_rate=full_rate, half_rate=half_rate,
        full_mags=tuple(full_mags), half_mags=tuple(half_mags),
        full_slope=full_slope, half_slope=half_slope,
        half_floor=float(min(half_mags)),
    )
