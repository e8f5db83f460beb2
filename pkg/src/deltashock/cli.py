"""Command-line front-end.

Subcommands: delta (build + verify a single delta-shock), riemann
(composite Riemann solver with fan listing and phase-plane samples),
asymptotic (decay reports for the smooth approximating families),
viscous (regularized runs + concentration series), curves (phase-plane
curve sampling), verify (re-verify a configured solution).

Configuration is TOML with tables [flux], [data], [run]; states are
two-element arrays.  All CSV output uses a header row, 17-significant-
digit scientific notation, LF line endings, and atomic replacement, so
identical configurations produce byte-identical files.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import tempfile

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .core import RiemannData, State, brio_flux, bump_test_function, \
    reduced_brio_flux
from .errors import DeltaShockError
from . import asymptotics, brio, gendelta, viscous, weakform

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


# ---------------------------------------------------------------------------
# CSV output

def _format_cell(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, complex):
        return f"{value.real:.17e}{value.imag:+.17e}j"
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.17e}"
    return str(value)


def write_csv(path, header, rows):
    """Write CSV atomically: temp file in the target directory + rename."""
    directory = os.path.dirname(os.path.abspath(path)) or "."
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(",".join(str(h) for h in header) + "\n")
            for row in rows:
                fh.write(",".join(_format_cell(c) for c in row) + "\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# ---------------------------------------------------------------------------
# config handling

def load_config(path):
    try:
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except FileNotFoundError:
        raise SystemExit(f"config file not found: {path}")
    except tomllib.TOMLDecodeError as exc:
        raise SystemExit(f"config parse error in {path}: {exc}")


def _require(cfg, table, key=None):
    if table not in cfg:
        raise SystemExit(f"config missing [{table}] table")
    if key is None:
        return cfg[table]
    if key not in cfg[table]:
        raise SystemExit(f"config missing key '{key}' in [{table}]")
    return cfg[table][key]


def _state(pair, label):
    try:
        u, v = pair
        return State(float(u), float(v))
    except (TypeError, ValueError):
        raise SystemExit(f"config: '{label}' must be a two-element array")


def _data_from(cfg):
    table = _require(cfg, "data")
    left = _state(_require(cfg, "data", "left"), "left")
    right = _state(_require(cfg, "data", "right"), "right")
    jump = float(table.get("jump_location", 0.0))
    return RiemannData(left, right, jump)


def _flux_from(cfg):
    name = _require(cfg, "flux", "name")
    if name == "brio":
        return brio_flux()
    if name == "reduced_brio":
        return reduced_brio_flux()
    raise SystemExit(f"unknown flux '{name}' (choose brio or reduced_brio)")


def _battery(speeds, horizon, seed=None, extra=0):
    battery = list(weakform.standard_battery(speeds, horizon))
    if seed is not None and extra > 0:
        rng = np.random.default_rng(seed)
        lo, hi = min(speeds), max(speeds)
        for k in range(extra):
            x0 = rng.uniform(lo * horizon - 1.0, hi * horizon + 1.0)
            t0 = rng.uniform(0.0, horizon)
            rx = rng.uniform(0.5, 2.0)
            rt = rng.uniform(0.3, 0.8)
            battery.append(
                bump_test_function(x0, rx, t0, rt, label=f"rphi{k:02d}")
            )
    return battery


def _eps_grid(args):
    e_hi = args.eps_max if args.eps_max is not None else 2.0 ** -4
    e_lo = args.eps_min if args.eps_min is not None else 2.0 ** -12
    if not 0 < e_lo < e_hi:
        raise SystemExit("--eps-min must be positive and below --eps-max")
    grid = []
    e = e_hi
    while e >= e_lo * (1.0 - 1e-12):
        grid.append(e)
        e *= 0.5
    return grid


# ---------------------------------------------------------------------------
# subcommands

def cmd_delta(args):
    cfg = load_config(args.config)
    flux = _flux_from(cfg)
    data = _data_from(cfg)
    carrier = _require(cfg, "run", "carrier")
    if carrier == "v":
        sol = gendelta.delta_shock_carrier_v(flux, data)
    elif carrier == "u":
        sol = gendelta.delta_shock_carrier_u(flux, data)
    else:
        raise SystemExit("run.carrier must be 'u' or 'v'")
    arc = sol.graph.arcs[0]
    write_csv(os.path.join(args.out, "delta_spec.csv"),
              ["carrier", "speed", "amp_rate",
               "u1", "v1", "u2", "v2"],
              [(carrier, arc.speed, arc.amp_rate,
                data.left.u, data.left.v, data.right.u, data.right.v)])
    battery = _battery([arc.speed], 1.0, seed=args.seed, extra=4)
    report = weakform.verify(sol, flux, battery, tol=args.tol)
    report.to_csv(os.path.join(args.out, "verify_report.csv"))
    print(f"delta: carrier={carrier} speed={arc.speed:.12g} "
          f"amp_rate={arc.amp_rate:.12g} verify="
          f"{'pass' if report.passed else 'FAIL'} "
          f"max_residual={report.max_residual:.3e}")
    return EXIT_OK if report.passed else EXIT_FAILED


def _fan_rows(fan):
    rows = []
    for w in fan.waves:
        lo, hi = w.speed_span()
        rows.append((
            w.kind, w.family or 0,
            w.left.u, w.left.v, w.right.u, w.right.v,
            lo, hi, w.amp_rate if w.kind == "delta" else 0.0,
        ))
    return rows


def cmd_riemann(args):
    cfg = load_config(args.config)
    data = _data_from(cfg)
    flux = brio_flux()
    L, R = data.left, data.right
    if R.v < 0.0 < L.v:
        fan = brio.solve_riemann_sign_change(L, R)
    else:
        fan = brio.solve_riemann_classical(L, R)
    write_csv(os.path.join(args.out, "fan.csv"),
              ["kind", "family", "u_left", "v_left", "u_right", "v_right",
               "speed_lo", "speed_hi", "amp_rate"],
              _fan_rows(fan))
    # admissible direct join, when defined
    if L.v != R.v:
        spec, flags = brio.direct_delta_join(L, R)
        write_csv(os.path.join(args.out, "direct_join.csv"),
                  ["admissible_lambda", "inequality_1", "inequality_2",
                   "speed", "amp_rate"],
                  [(flags["lambda_form"], flags["inequality_1"],
                    flags["inequality_2"],
                    spec.speed if spec else math.nan,
                    spec.amp_rate if spec else math.nan)])
    # phase-plane samples for plotting
    rows = []
    vs = np.linspace(-3.0, 3.0, 241)
    for name, curve in (
        ("rw1_left", brio.rarefaction_curve(1, L)),
        ("sw1_left", brio.shock_curve(1, L)),
        ("sw2_right", brio.shock_curve(2, R)),
    ):
        for v, u, lam, sig in brio.sample_curve(curve, vs):
            rows.append((name, v, u, lam, sig))
    if R.v != 0.0:
        for v, u, lam, sig in brio.sample_curve(
                brio.rarefaction_curve(2, R), vs):
            rows.append(("rw2_right", v, u, lam, sig))
    write_csv(os.path.join(args.out, "curves.csv"),
              ["curve", "v", "u", "char_speed", "shock_speed"], rows)
    if args.verify:
        sol = fan.to_singular_solution(flux)
        speeds = [s for w in fan.waves for s in w.speed_span()] or [0.0]
        report = weakform.verify(sol, flux, _battery(speeds, 1.0),
                                 tol=args.tol)
        report.to_csv(os.path.join(args.out, "verify_report.csv"))
        print(f"riemann: {len(fan.waves)} waves, verify="
              f"{'pass' if report.passed else 'FAIL'} "
              f"max_residual={report.max_residual:.3e}")
        return EXIT_OK if report.passed else EXIT_FAILED
    print(f"riemann: {len(fan.waves)} waves "
          + " ".join(w.kind for w in fan.waves))
    return EXIT_OK


def cmd_asymptotic(args):
    cfg = load_config(args.config)
    run = _require(cfg, "run")
    variant = run.get("variant", "A")
    grid = _eps_grid(args)
    if len(grid) < 2:
        print("asymptotic: eps grid needs at least two values; widen the "
              "--eps-min/--eps-max range", file=sys.stderr)
        return EXIT_FAILED
    status = EXIT_OK
    if variant in ("A", "B"):
        data = _data_from(cfg)
        if variant == "A":
            builder = lambda e: asymptotics.build_family_a(data, e)
            c = float(gendelta.carrier_v_speed_amplitude(brio_flux(), data)[0])
        else:
            builder = lambda e: asymptotics.build_family_b(data, e)
            c = float(gendelta.carrier_u_speed_amplitude(brio_flux(), data)[0])
        battery = asymptotics.standard_space_battery([c])
        report = asymptotics.decay_report(builder, battery, grid)
        report.to_csv(os.path.join(args.out, f"decay_{variant}.csv"))
        print(f"asymptotic {variant}: worst slope "
              f"{report.worst_slope():.3f} "
              f"{'pass' if report.passed else 'FAIL'}")
        if not report.passed:
            status = EXIT_FAILED
    elif variant.lower() == "symmetric":
        u = float(run.get("u", 0.0))
        v_bar = float(_require(cfg, "run", "v_bar"))
        speeds = [float(c) for c in run.get("speeds", [-1.0, 0.0, 2.0])]
        for c in speeds:
            builder = lambda e, c=c: asymptotics.build_family_symmetric(
                u, v_bar, c, e)
            battery = asymptotics.standard_space_battery([c])
            report = asymptotics.decay_report(builder, battery, grid)
            report.to_csv(
                os.path.join(args.out, f"decay_symmetric_c{c:+g}.csv"))
            print(f"asymptotic symmetric c={c:+g}: worst slope "
                  f"{report.worst_slope():.3f} "
                  f"{'pass' if report.passed else 'FAIL'}")
            if not report.passed:
                status = EXIT_FAILED
    else:
        raise SystemExit("run.variant must be A, B, or symmetric")
    return status


def cmd_viscous(args):
    cfg = load_config(args.config)
    data = _data_from(cfg)
    run_tab = _require(cfg, "run")
    try:
        config = viscous.ViscousConfig(
            half_width=float(_require(cfg, "run", "half_width")),
            cells=int(_require(cfg, "run", "cells")),
            mu=float(_require(cfg, "run", "mu")),
            cfl=float(run_tab.get("cfl", 0.4)),
            final_time=float(run_tab.get("final_time", 1.0)),
            data=data,
            snapshots=int(run_tab.get("snapshots", 9)),
        )
        result = viscous.run(config)
    except (ValueError, DeltaShockError) as exc:
        print(f"viscous: {exc}", file=sys.stderr)
        return EXIT_FAILED
    result.to_csv(os.path.join(args.out, "snapshots.csv"))
    carrier = run_tab.get("track_carrier")
    if carrier:
        speed = float(run_tab.get("track_speed", 0.0))
        series = viscous.concentration_mass(result, carrier, speed)
        series.to_csv(os.path.join(args.out, "concentration.csv"))
        print(f"viscous: {result.steps} steps, conservation defect "
              f"{result.conservation_defect:.2e}, tracked slope "
              f"{series.slope:.6g}")
    else:
        print(f"viscous: {result.steps} steps, conservation defect "
              f"{result.conservation_defect:.2e}")
    return EXIT_OK


def cmd_curves(args):
    cfg = load_config(args.config)
    tab = _require(cfg, "curves")
    anchor = _state(_require(cfg, "curves", "anchor"), "anchor")
    family = int(tab.get("family", 1))
    kind = tab.get("kind", "rarefaction")
    v_lo = float(tab.get("v_min", -3.0))
    v_hi = float(tab.get("v_max", 3.0))
    n = int(tab.get("samples", 241))
    if kind == "rarefaction":
        curve = brio.rarefaction_curve(family, anchor)
    elif kind == "shock":
        curve = brio.shock_curve(family, anchor)
    else:
        raise SystemExit("curves.kind must be rarefaction or shock")
    rows = brio.sample_curve(curve, np.linspace(v_lo, v_hi, n))
    write_csv(os.path.join(args.out, "curve.csv"),
              ["v", "u", "char_speed", "shock_speed"], rows)
    print(f"curves: {len(rows)} samples of {kind} family {family}")
    return EXIT_OK


def cmd_verify(args):
    cfg = load_config(args.config)
    run_tab = _require(cfg, "run")
    kind = run_tab.get("solution", "delta")
    flux = _flux_from(cfg) if "flux" in cfg else brio_flux()
    if kind == "delta":
        data = _data_from(cfg)
        carrier = _require(cfg, "run", "carrier")
        builder = (gendelta.delta_shock_carrier_v if carrier == "v"
                   else gendelta.delta_shock_carrier_u)
        sol = builder(flux, data)
        speeds = [sol.graph.arcs[0].speed]
    elif kind == "nonuniqueness":
        beta = float(_require(cfg, "run", "beta"))
        c1 = float(_require(cfg, "run", "c1"))
        c2 = float(_require(cfg, "run", "c2"))
        sol = gendelta.nonuniqueness_pair(beta, c1, c2)
        speeds = [c1, c2]
    elif kind == "riemann":
        data = _data_from(cfg)
        fan = brio.solve_riemann_sign_change(data.left, data.right)
        sol = fan.to_singular_solution(flux)
        speeds = [s for w in fan.waves for s in w.speed_span()]
    else:
        raise SystemExit(
            "run.solution must be delta, nonuniqueness, or riemann")
    battery = _battery(speeds, 1.0, seed=args.seed, extra=4)
    report = weakform.verify(sol, flux, battery, tol=args.tol)
    report.to_csv(os.path.join(args.out, "verify_report.csv"))
    print(f"verify: {'pass' if report.passed else 'FAIL'} "
          f"max_residual={report.max_residual:.3e} tol={args.tol:.1e}")
    return EXIT_OK if report.passed else EXIT_FAILED


# ---------------------------------------------------------------------------

def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="deltashock",
        description="delta-shock construction, verification, and "
                    "classification for the Brio system",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    commands = {
        "delta": cmd_delta,
        "riemann": cmd_riemann,
        "asymptotic": cmd_asymptotic,
        "viscous": cmd_viscous,
        "curves": cmd_curves,
        "verify": cmd_verify,
    }
    for name, fn in commands.items():
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="TOML configuration")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--tol", type=float, default=1e-7,
                       help="verification tolerance")
        p.add_argument("--eps-min", type=float, default=None,
                       help="smallest eps of the dyadic grid")
        p.add_argument("--eps-max", type=float, default=None,
                       help="largest eps of the dyadic grid")
        p.add_argument("--jobs", type=int, default=1,
                       help="worker count (runs are currently sequential)")
        p.add_argument("--seed", type=int, default=None,
                       help="seed for the optional randomized test battery")
        if name == "riemann":
            p.add_argument("--verify", action="store_true",
                           help="also run the weak-form verifier on the fan")
        p.set_defaults(func=fn)
    args = parser.parse_args(argv)
    if args.jobs < 1:
        parser.error("--jobs must be >= 1")
    os.makedirs(args.out, exist_ok=True)
    try:
        return args.func(args)
    except DeltaShockError as exc:
        print(f"{args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
