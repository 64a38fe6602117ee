"""Command-line front end.

Every subcommand writes a table as CSV (``#`` comment lines carrying the
configuration and units, then a header row) or as a JSON envelope
``{"schema_version", "config", "rows"}``.  Floats are written with 17
significant digits so the output round-trips exactly.

Exit codes: 0 success, 2 configuration error, 3 solver failure, 4 partial
success (some spectrum rows failed).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .core import BreitError, MassMode, PhysicalSystem, build_context, kummer_polynomial
from .eigensolver import (
    EnergyLevel,
    binding_series,
    breit_dirac_comparison,
    dirac_ground_state,
    equal_mass_level,
    solve_level,
)
from .radial import (
    FirstOrderCorrection,
    assemble_components,
    asymptotic_series,
    ode_residual,
    residual_orders,
    schrodinger_context,
)

SCHEMA_VERSION = 1
CODATA_ALPHA = 7.2973525693e-3
DEFAULT_GRID = "1e-3:40:400:log"
THREADS_ENV = "BREIT_SPECTRA_THREADS"
UNITS = "masses, energies and q in the units of --m and --M; rho = 2 q r is dimensionless"

EXIT_OK, EXIT_CONFIG, EXIT_SOLVER, EXIT_PARTIAL = 0, 2, 3, 4


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class GridSpec:
    start: float
    stop: float
    points: int
    spacing: str

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        parts = text.split(":")
        if len(parts) != 4:
            raise ConfigError(f"--grid expects min:max:points:{{log|lin}}, got {text!r}")
        try:
            start, stop, points = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError as exc:
            raise ConfigError(f"--grid: {exc}") from None
        spacing = parts[3]
        if spacing not in ("log", "lin"):
            raise ConfigError(f"--grid spacing must be 'log' or 'lin', got {spacing!r}")
        if not (0 < start < stop and math.isfinite(stop)):
            raise ConfigError("--grid needs 0 < min < max")
        if points < 2:
            raise ConfigError("--grid needs at least 2 points")
        return cls(start, stop, points, spacing)

    def values(self) -> np.ndarray:
        if self.spacing == "log":
            return np.geomspace(self.start, self.stop, self.points)
        return np.linspace(self.start, self.stop, self.points)

    def __str__(self) -> str:
        return f"{self.start!r}:{self.stop!r}:{self.points}:{self.spacing}"


# -- formatting ----------------------------------------------------------------


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def _json_value(value):
    if isinstance(value, (np.floating, float)):
        v = float(value)
        return v if math.isfinite(v) else _fmt(v)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    return value


def render(rows: list[dict], config: dict, fmt: str) -> str:
    if fmt == "json":
        envelope = {
            "schema_version": SCHEMA_VERSION,
            "config": config,
            "rows": [{k: _json_value(v) for k, v in row.items()} for row in rows],
        }
        return json.dumps(envelope, indent=2, sort_keys=False) + "\n"
    buf = io.StringIO()
    buf.write(f"# schema_version={SCHEMA_VERSION}\n")
    buf.write(f"# config={json.dumps(config, sort_keys=True)}\n")
    buf.write(f"# units: {UNITS}\n")
    if rows:
        header = list(rows[0])
        for row in rows[1:]:
            header.extend(k for k in row if k not in header)
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(row[k]) if k in row else "" for k in header])
    return buf.getvalue()


# -- commands ------------------------------------------------------------------


def _system(args) -> PhysicalSystem:
    return PhysicalSystem(args.m, args.M, args.alpha)


def _level(system: PhysicalSystem, n: int, tol: float) -> EnergyLevel:
    if system.is_equal_mass:
        return equal_mass_level(system, n)
    return solve_level(system, n, tol=tol)


def _threads() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return 1
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from None
    if value < 1:
        raise ConfigError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return value


def cmd_spectrum(args) -> tuple[list[dict], int]:
    system = _system(args)
    order = min(args.terms, 3)

    def row(n: int) -> dict:
        out: dict = {"n": n}
        try:
            level = _level(system, n, args.tol)
            series = binding_series(system, n, order=order)
        except BreitError as exc:
            out.update(n_bar=math.nan, q=math.nan, E=math.nan, B=math.nan)
            out.update({f"B_series_{j}": math.nan for j in range(1, order + 1)})
            out["status"] = f"error: {exc}"
            return out
        out.update(n_bar=level.n_bar, q=level.q, E=level.energy, B=level.binding)
        out.update({f"B_series_{j}": p for j, p in enumerate(series.partial_sums, start=1)})
        out["status"] = "ok"
        return out

    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        rows = list(pool.map(row, range(1, args.n_max + 1)))
    failed = sum(r["status"] != "ok" for r in rows)
    if failed == len(rows):
        return rows, EXIT_SOLVER
    return rows, EXIT_PARTIAL if failed else EXIT_OK


def cmd_level(args) -> tuple[list[dict], int]:
    system = _system(args)
    level = solve_level(system, args.n, tol=args.tol)
    out = {"n": level.n, "n_bar": level.n_bar, "q": level.q, "E": level.energy,
           "B": level.binding, "residual": level.diagnostics["residual"],
           "iterations": level.diagnostics["iterations"]}
    if system.is_equal_mass:
        out["E_closed_form"] = equal_mass_level(system, args.n).energy
        ctx = build_context(system, level.q, MassMode.EQUAL)
        series = asymptotic_series(ctx, args.n, args.terms, args.delta_convention)
        out.update({f"asym_c{k}": c for k, c in enumerate(series.coefficients)})
    return [out], EXIT_OK


def cmd_wavefunction(args) -> tuple[list[dict], int]:
    system = _system(args)
    level = _level(system, args.n, args.tol)
    order = args.order
    if system.is_equal_mass:
        ctx = build_context(system, level.q, MassMode.EQUAL)
    else:
        ctx = build_context(system, level.q, MassMode.UNEQUAL)
        if order == 1:
            print("notice: first-order correction is implemented for equal masses only; "
                  "writing order 0", file=sys.stderr)
            order = 0
    grid = assemble_components(ctx, args.n, args.grid.values(), order=order)
    cols = grid.columns()
    rows = [{k: v[i] for k, v in cols.items()} for i in range(len(grid.rho))]
    return rows, EXIT_OK


def cmd_binding_series(args) -> tuple[list[dict], int]:
    system = _system(args)
    order = min(args.terms, 3)
    exact = binding_series(system, args.n, order=order)
    printed = binding_series(system, args.n, order=order, convention="printed")
    B = solve_level(system, args.n, tol=args.tol).binding
    rows = []
    for j in range(order):
        rows.append({
            "order": j + 1,
            "x": exact.expansion_parameter,
            "e_exact": exact.coefficients[j],
            "partial_exact": exact.partial_sums[j],
            "e_printed": printed.coefficients[j],
            "partial_printed": printed.partial_sums[j],
            "B_root": B,
        })
    return rows, EXIT_OK


def cmd_dirac_compare(args) -> tuple[list[dict], int]:
    if args.m != args.M:
        print("notice: the comparison uses --m for both particles", file=sys.stderr)
    dirac = dirac_ground_state(args.m, args.alpha)
    cmp = breit_dirac_comparison(args.m, args.alpha)
    n_cond, d_cond = dirac.diagnostics["conditions"]
    row = {"q_dirac": cmp.q_dirac, "E_dirac": dirac.energy, "s_dirac": cmp.s_dirac,
           "N_dirac": n_cond, "delta_dirac": d_cond, "q_breit": cmp.q_breit,
           "s_breit": cmp.s_breit, "N_breit": cmp.N_breit, "delta_breit": cmp.delta_breit}
    return [row], EXIT_OK


def cmd_residual_check(args) -> tuple[list[dict], int]:
    if args.m != args.M:
        raise ConfigError("residual-check requires equal masses (--m == --M)")
    rho = args.grid.values() if args.grid_given else np.linspace(0.5, 8.0, 64)
    results = {}
    for label, alpha in (("alpha", args.alpha), ("half_alpha", args.alpha / 2)):
        system = PhysicalSystem(args.m, args.M, alpha)
        ctx = build_context(system, equal_mass_level(system, args.n).q, MassMode.EQUAL)
        corr = FirstOrderCorrection(ctx, args.n)
        results[label] = residual_orders(ctx, args.n, rho, corr)
    sch_ctx = schrodinger_context(PhysicalSystem(args.m, args.M, args.alpha), args.n)
    sch_h = kummer_polynomial(args.n - 1, 2.0)
    sch = ode_residual(sch_ctx, args.n, sch_h, rho, dh=sch_h.deriv(), d2h=sch_h.deriv(2),
                       truncation="schrodinger")
    row = {"n": args.n, "alpha": args.alpha}
    for label in results:
        row[f"order0_max_{label}"] = results[label][0].max_abs
        row[f"order1_max_{label}"] = results[label][1].max_abs
    for k, name in ((0, "order0"), (1, "order1")):
        ratio = results["alpha"][k].max_abs / results["half_alpha"][k].max_abs
        row[f"{name}_exponent"] = math.log2(ratio)
    row["schrodinger_max"] = sch.max_abs
    return [row], EXIT_OK


COMMANDS = {
    "spectrum": cmd_spectrum,
    "level": cmd_level,
    "wavefunction": cmd_wavefunction,
    "binding-series": cmd_binding_series,
    "dirac-compare": cmd_dirac_compare,
    "residual-check": cmd_residual_check,
}


# -- argument handling -----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    common.add_argument("--m", type=float, default=1.0, help="mass of the negative particle")
    common.add_argument("--M", type=float, default=None, help="mass of the positive particle "
                        "(default: equal to --m)")
    common.add_argument("--alpha", type=float, default=CODATA_ALPHA, help="coupling constant")
    common.add_argument("--n", type=int, default=1, help="principal quantum number")
    common.add_argument("--n-max", type=int, default=5, help="highest n for spectrum")
    common.add_argument("--grid", default=None,
                        help=f"rho grid min:max:points:{{log|lin}} (default {DEFAULT_GRID})")
    common.add_argument("--format", choices=("csv", "json"), default=None)
    common.add_argument("--tol", type=float, default=1e-12, help="root-finder tolerance")
    common.add_argument("--terms", type=int, default=3, help="series terms")
    common.add_argument("--delta-convention", choices=("exact", "truncated"),
                        default="exact")
    common.add_argument("--order", type=int, choices=(0, 1), default=1,
                        help="wavefunction order in alpha^2")
    common.add_argument("--out", default=None, help="output path (default stdout)")
    parser = argparse.ArgumentParser(
        prog="breit-spectra", allow_abbrev=False,
        description="Singlet S-state spectra and wavefunctions of the two-body Breit equation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], allow_abbrev=False)
    return parser


def _validate(args) -> None:
    if args.M is None:
        args.M = args.m
    for name in ("m", "M", "alpha", "tol"):
        value = getattr(args, name)
        if not (math.isfinite(value) and value > 0):
            raise ConfigError(f"--{name} must be a positive number, got {value}")
    if args.alpha >= 2:
        raise ConfigError(f"--alpha must be below 2, got {args.alpha}")
    if args.command == "dirac-compare" and args.alpha >= 1:
        raise ConfigError("dirac-compare requires --alpha < 1")
    if args.tol < 1e-14:
        raise ConfigError(f"--tol must be >= 1e-14, got {args.tol}")
    if args.n < 1 or args.n_max < 1:
        raise ConfigError("--n and --n-max must be positive integers")
    if args.terms < 1:
        raise ConfigError("--terms must be a positive integer")
    args.grid_given = args.grid is not None
    args.grid = GridSpec.parse(args.grid or DEFAULT_GRID)
    if args.format is None:
        args.format = "json" if args.command == "residual-check" else "csv"


def _config(args) -> dict:
    return {
        "command": args.command, "m": args.m, "M": args.M, "alpha": args.alpha,
        "n": args.n, "n_max": args.n_max, "grid": str(args.grid), "format": args.format,
        "tol": args.tol, "terms": args.terms, "delta_convention": args.delta_convention,
        "order": args.order,
    }


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _validate(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.alpha > 0.5:
        print(f"warning: alpha={args.alpha} is large; the alpha^2 expansion is unreliable",
              file=sys.stderr)
    try:
        rows, code = COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except BreitError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    text = render(rows, _config(args), args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
