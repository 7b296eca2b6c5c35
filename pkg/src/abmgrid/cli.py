"""Command-line interface: poly, tov, sieve, and sweep subcommands.

Every data file is machine-readable (CSV or JSON with a shipped
schema), serialized so 64-bit values round-trip (17 significant
digits), and free of wall-clock values, so re-running a command
reproduces its outputs bit-for-bit.  When ``--out`` is given, a sidecar
``<out>.manifest.json`` records the command, every resolved flag, the
integrator configuration, the physical constants, the tool version,
and a timestamp: a run is reproducible from its manifest alone.
Without ``--out`` the data table goes to stdout and the one-line
summary to stderr.

Exit codes: 0 success, 1 integration/runtime failure (with partial
output and a diagnostic), 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from datetime import datetime, timezone

from . import __version__
from .eos import CONSTANTS
from .integrator import IntegrationError, IntegratorConfig, Mode
from .poly import PolyCase, poly_exact, run_poly_case
from .tov import HorizonError, integrate_star, parameter_sweep, star_config, \
    trinary_sieve

__all__ = ["build_parser", "main"]


class _UsageError(Exception):
    """Flag validation failure after parsing; maps to exit code 2."""


# ---------------------------------------------------------------- output

def _format_cell(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, int):
        return str(value)
    return f"{float(value):.17g}"


def _json_cell(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def _write_table(stream, fmt: str, kind: str, columns, rows, summary):
    if fmt == "csv":
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_format_cell(cell) for cell in row])
    else:
        payload = {
            "kind": kind,
            "columns": list(columns),
            "rows": [[_json_cell(cell) for cell in row] for row in rows],
            "summary": {key: _json_cell(val) for key, val in summary.items()},
        }
        json.dump(payload, stream, indent=2)
        stream.write("\n")


def _config_dict(config: IntegratorConfig) -> dict:
    return {
        "order_ab": config.order_ab,
        "target_correction": config.target_correction,
        "dx_initial": config.dx_initial,
        "dx_min": config.dx_min,
        "growth_cap": config.growth_cap,
        "mode": config.mode.value,
        "max_steps": config.max_steps,
    }


def _manifest(command: str, args, config) -> dict:
    flags = {key: val for key, val in sorted(vars(args).items())
             if key not in ("func", "command")}
    return {
        "command": command,
        "flags": flags,
        "config": config,
        "constants": CONSTANTS.as_dict(),
        "version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }


def _emit(args, command: str, kind: str, columns, rows, summary,
          config, summary_line: str) -> None:
    """Write the data table and manifest per the --out convention."""
    fmt = getattr(args, "format", "csv")
    if args.out is None:
        _write_table(sys.stdout, fmt, kind, columns, rows, summary)
        print(summary_line, file=sys.stderr)
        return
    with open(args.out, "w", newline="") as fh:
        _write_table(fh, fmt, kind, columns, rows, summary)
    with open(f"{args.out}.manifest.json", "w") as fh:
        json.dump(_manifest(command, args, config), fh, indent=2,
                  sort_keys=True)
        fh.write("\n")
    print(summary_line)


# ---------------------------------------------------------------- poly

_POLY_COLUMNS = ["i", "x", "dx", "y", "epsilon_max", "y_exact", "error"]


def _poly_rows(trajectory):
    rows = []
    for record in trajectory.records:
        y = float(record.y_am[0])
        exact = float(poly_exact(record.x_next))
        rows.append([record.index, record.x_next, record.dx, y,
                     record.epsilon_max, exact, y - exact])
    return rows


def cmd_poly(args) -> int:
    if args.xend <= args.x0:
        raise _UsageError("--xend must exceed --x0")
    if args.order < 1:
        raise _UsageError("--order must be >= 1")
    if args.dx <= 0 or args.tol <= 0:
        raise _UsageError("--dx and --tol must be positive")
    case = PolyCase(mode=Mode(args.mode), order=args.order, dx=args.dx,
                    tolerance=args.tol, x0=args.x0, y0=args.y0,
                    x_end=args.xend)
    failure = None
    try:
        trajectory = run_poly_case(case).trajectory
    except IntegrationError as exc:
        failure = exc
        trajectory = exc.trajectory
    rows = _poly_rows(trajectory)
    status = "ok" if failure is None else f"failed: {failure}"
    summary = {
        "status": status,
        "steps": len(trajectory),
        "final_x": trajectory.final_x,
        "final_y": float(trajectory.final_y[0]),
        "final_error": float(trajectory.final_y[0] - poly_exact(trajectory.final_x)),
        "n_evals": trajectory.n_evals,
    }
    line = (f"steps={summary['steps']} final_x={summary['final_x']:.17g} "
            f"final_y={summary['final_y']:.17g} "
            f"final_error={summary['final_error']:.3e}")
    _emit(args, "poly", "trajectory", _POLY_COLUMNS, rows, summary,
          _config_dict(case.config()), line)
    if failure is not None:
        print(f"error: {failure}", file=sys.stderr)
        return 1
    return 0


# ---------------------------------------------------------------- tov

_STAR_COLUMNS = ["i", "r_cm", "dr_cm", "m_g", "P_erg_cm3", "epsilon_max",
                 "flags"]


def _star_rows(trajectory):
    rows = []
    last = len(trajectory.records) - 1
    for record in trajectory.records:
        flags = []
        if record.capped:
            flags.append("cap")
        if record.floored:
            flags.append("floor")
        if (record.index == last and trajectory.halted
                and record.y_am[1] <= 0.0):
            flags.append("surface")
        rows.append([record.index, record.x_next, record.dx,
                     float(record.y_am[0]), float(record.y_am[1]),
                     record.epsilon_max, "+".join(flags)])
    return rows


def cmd_tov(args) -> int:
    if not (args.pc > 0.0 and math.isfinite(args.pc)):
        raise _UsageError("--pc must be a positive, finite pressure")
    if args.order < 1:
        raise _UsageError("--order must be >= 1")
    if args.tol <= 0 or args.dx0 <= 0 or args.dxmin < 0:
        raise _UsageError("--tol and --dx0 must be positive, --dxmin >= 0")
    config = star_config(args.order, args.tol, args.dx0, args.dxmin)
    failure = None
    star = None
    try:
        star = integrate_star(args.pc, config)
        trajectory = star.trajectory
    except (HorizonError, IntegrationError) as exc:
        failure = exc
        trajectory = getattr(exc, "trajectory", None)
    rows = _star_rows(trajectory) if trajectory is not None else []
    if star is not None:
        summary = {
            "status": "ok",
            "P_central": star.P_central,
            "M_g": star.M,
            "M_msun": star.M_msun,
            "R_cm": star.R,
            "R_km": star.R_km,
            "steps": star.steps,
            "n_evals": trajectory.n_evals,
        }
        line = (f"M = {star.M_msun:.8f} M_sun  R = {star.R_km:.5f} km  "
                f"steps = {star.steps}")
    else:
        kind = ("horizon formation" if isinstance(failure, HorizonError)
                else "integration failure")
        summary = {"status": f"failed ({kind}): {failure}",
                   "P_central": args.pc,
                   "steps": len(rows)}
        line = f"failed ({kind}) after {len(rows)} accepted steps"
    _emit(args, "tov", "star", _STAR_COLUMNS, rows, summary,
          _config_dict(config), line)
    if failure is not None:
        print(f"error ({kind}): {failure}", file=sys.stderr)
        return 1
    return 0


# ---------------------------------------------------------------- sieve

def cmd_sieve(args) -> int:
    if not 0.0 < args.lo < args.hi:
        raise _UsageError("need 0 < --lo < --hi")
    if args.order < 1 or args.tol <= 0 or args.bracket_tol <= 0:
        raise _UsageError("--order, --tol, --bracket-tol must be positive")
    config = star_config(args.order, args.tol)
    try:
        result = trinary_sieve(args.lo, args.hi, config,
                               bracket_tolerance=args.bracket_tol,
                               jobs=args.jobs)
    except (HorizonError, IntegrationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"P_c* = {result.P_c:.17g} erg/cm^3")
    print(f"M*   = {result.M_msun:.8f} M_sun ({result.star.M:.17g} g)")
    print(f"R*   = {result.R_km:.5f} km ({result.star.R:.17g} cm)")
    print(f"iterations = {result.iterations}  "
          f"star evaluations = {result.evaluations}")
    return 0


# ---------------------------------------------------------------- sweep

_SWEEP_COLUMNS = ["order", "tol", "steps", "M_msun", "R_km", "rel_dM",
                  "rel_dR", "status"]


def _parse_orders(text: str):
    text = text.strip()
    if not text:
        raise _UsageError("--orders is empty")
    if ".." in text:
        lo_text, _, hi_text = text.partition("..")
        try:
            lo, hi = int(lo_text), int(hi_text)
        except ValueError as exc:
            raise _UsageError(f"bad --orders range {text!r}") from exc
        if lo < 1 or hi < lo:
            raise _UsageError(f"bad --orders range {text!r}")
        return list(range(lo, hi + 1))
    try:
        orders = [int(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise _UsageError(f"bad --orders list {text!r}") from exc
    if not orders or any(order < 1 for order in orders):
        raise _UsageError(f"bad --orders list {text!r}")
    return orders


def _parse_tols(text: str):
    try:
        tols = [float(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise _UsageError(f"bad --tols list {text!r}") from exc
    if not tols or any(not tol > 0 for tol in tols):
        raise _UsageError("--tols must be a non-empty list of positive reals")
    return tols


def cmd_sweep(args) -> int:
    orders = _parse_orders(args.orders)
    tols = _parse_tols(args.tols)
    if not (args.pc > 0.0 and math.isfinite(args.pc)):
        raise _UsageError("--pc must be a positive, finite pressure")
    if (args.ref_mass is None) != (args.ref_radius is None):
        raise _UsageError("give both --ref-mass and --ref-radius or neither")
    if args.ref_mass is None:
        reference_run = integrate_star(args.pc, star_config(10, 1e-8))
        reference = (reference_run.M, reference_run.R)
    else:
        if args.ref_mass <= 0 or args.ref_radius <= 0:
            raise _UsageError("--ref-mass and --ref-radius must be positive")
        reference = (args.ref_mass, args.ref_radius)
    cells = parameter_sweep(orders, tols, args.pc, reference, jobs=args.jobs)
    rows = [[cell.order, cell.tolerance, cell.steps, cell.M_msun, cell.R_km,
             cell.rel_dM, cell.rel_dR, cell.status] for cell in cells]
    n_ok = sum(cell.ok for cell in cells)
    summary = {
        "status": "ok" if n_ok else "all cells failed",
        "cells": len(cells),
        "cells_ok": n_ok,
        "P_central": args.pc,
        "M_ref_g": reference[0],
        "R_ref_cm": reference[1],
    }
    config = _config_dict(star_config(orders[0], tols[0]))
    config["order_ab"] = "per-cell"
    config["target_correction"] = "per-cell"
    _emit(args, "sweep", "sweep", _SWEEP_COLUMNS, rows, summary, config,
          f"{n_ok}/{len(cells)} cells ok")
    return 0 if n_ok else 1


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="abmgrid",
        description="Adams-Bashforth-Moulton integration studies: "
                    "polynomial test problem and neutron-star structure.")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    poly = sub.add_parser("poly", help="quartic-derivative test problem")
    poly.add_argument("--mode", choices=[mode.value for mode in Mode],
                      default=Mode.ABM_ADAPTIVE.value)
    poly.add_argument("--order", type=int, required=True,
                      help="explicit-phase order (history nodes)")
    poly.add_argument("--dx", type=float, default=0.25,
                      help="step size (initial step size when adaptive)")
    poly.add_argument("--tol", type=float, default=1e-8,
                      help="target fractional correction E")
    poly.add_argument("--x0", type=float, default=0.5)
    poly.add_argument("--y0", type=float, default=1.0)
    poly.add_argument("--xend", type=float, default=5.0)
    poly.add_argument("--out", default=None, help="output data file")
    poly.add_argument("--format", choices=["csv", "json"], default="csv")
    poly.set_defaults(func=cmd_poly)

    tov = sub.add_parser("tov", help="integrate one neutron star")
    tov.add_argument("--pc", type=float, required=True,
                     help="central pressure, erg/cm^3")
    tov.add_argument("--order", type=int, required=True)
    tov.add_argument("--tol", type=float, default=1e-8)
    tov.add_argument("--dx0", type=float, default=10.0,
                     help="initial step, cm")
    tov.add_argument("--dxmin", type=float, default=10.0,
                     help="minimum step, cm")
    tov.add_argument("--out", default=None)
    tov.add_argument("--format", choices=["csv", "json"], default="csv")
    tov.set_defaults(func=cmd_tov)

    sieve = sub.add_parser("sieve", help="maximum-mass central pressure")
    sieve.add_argument("--lo", type=float, default=1e35)
    sieve.add_argument("--hi", type=float, default=1e36)
    sieve.add_argument("--order", type=int, default=6)
    sieve.add_argument("--tol", type=float, default=1e-8)
    sieve.add_argument("--bracket-tol", type=float, default=1e-3,
                       dest="bracket_tol",
                       help="relative bracket width at convergence")
    sieve.add_argument("--jobs", type=int, default=1)
    sieve.set_defaults(func=cmd_sieve)

    sweep = sub.add_parser("sweep", help="order x tolerance efficiency table")
    sweep.add_argument("--orders", required=True,
                       help="range A..B or comma list")
    sweep.add_argument("--tols", required=True, help="comma list of E values")
    sweep.add_argument("--pc", type=float, required=True)
    sweep.add_argument("--ref-mass", type=float, default=None,
                       dest="ref_mass", help="reference mass, g")
    sweep.add_argument("--ref-radius", type=float, default=None,
                       dest="ref_radius", help="reference radius, cm")
    sweep.add_argument("--out", default=None)
    sweep.add_argument("--format", choices=["csv", "json"], default="csv")
    sweep.add_argument("--jobs", type=int, default=1)
    sweep.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_:
        return int(exit_.code or 0)
    try:
        return args.func(args)
    except _UsageError as usage:
        print(f"error: {usage}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
