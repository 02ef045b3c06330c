"""
Command-line interface::

    filtrate {state,solve,correct,region,classify,verify} [--config PATH] [--out PATH]

Exit codes: 0 success, 1 invalid input, 2 numeric failure. Reports are one
JSON object on stdout; errors are one JSON object on stderr.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import perturb, regions, selfsim, thermo, verify
from .config import METHANE_EXAMPLE, ConfigError, load_config, parse_config
from .media import classify_symmetries

logger = logging.getLogger("filtrate")

NUMERIC_ERRORS = (thermo.ConvergenceError, thermo.NoRootError, selfsim.PressureCrossing,
                  FloatingPointError, RuntimeError)


def fmt(x):
    return f"{float(x):.16e}"


def write_csv(header, rows, stream):
    stream.write(",".join(header) + "\n")
    for row in rows:
        stream.write(",".join(
            str(int(c)) if isinstance(c, (bool, np.bool_)) else c if isinstance(c, str) else fmt(c)
            for c in row) + "\n")


def _emit_csv(header, rows, out):
    if out is None:
        write_csv(header, rows, sys.stdout)
    else:
        with open(out, "w", newline="\n") as fh:
            write_csv(header, rows, fh)


def _emit_json(obj):
    sys.stdout.write(json.dumps(obj, sort_keys=True) + "\n")


def _r_grid(cfg, args):
    num = cfg.numerics
    r_min = args.r_min if args.r_min is not None else num.r_min
    r_max = args.r_max if args.r_max is not None else num.r_max
    steps = args.steps if args.steps is not None else num.steps
    if not r_min > 0:
        raise ConfigError("numerics.r_min", "r must be positive")
    if not r_max >= r_min:
        raise ConfigError("numerics.r_max", "r_max must not be below r_min")
    if steps < 1:
        raise ConfigError("numerics.steps", "need at least one step")
    return np.linspace(r_min, r_max, steps)


def cmd_state(cfg, args):
    if args.v is None or args.T is None:
        raise ConfigError("--v/--T", "state needs --v and --T")
    model = cfg.potential()
    if not args.T > 0:
        raise ConfigError("--T", "temperature must be positive")
    if not args.v > 0:
        raise ConfigError("--v", "specific volume must be positive")
    if not args.v > model.excluded_volume:
        raise ConfigError("gas.b", f"v={args.v} must exceed b={model.b}")
    st = thermo.state_from_potential(model, args.v, args.T)
    ap = thermo.applicability(model, args.v, args.T)
    _emit_json({
        "p": float(st.p), "epsilon": float(st.epsilon), "s": float(st.s),
        "convexity_ok": bool(ap.convexity_ok), "heat_capacity_ok": bool(ap.heat_capacity_ok),
    })


def cmd_solve(cfg, args):
    sol = cfg.solution_obj()
    r = _r_grid(cfg, args)
    v = selfsim.volume_profile(sol, r)
    p = selfsim.pressure(sol, r)
    T = p * v / sol.R
    u = selfsim.flow_field(sol, 1.0, r, 0.0, 0.0)
    u_mag = np.linalg.norm(u, axis=0)
    _emit_csv(["r", "v", "p", "T", "u_mag"], zip(r, v, p, T, u_mag), args.out)


def cmd_correct(cfg, args):
    cs = cfg.corrections_obj()
    r = _r_grid(cfg, args)
    if np.any(r < cs.r_floor):
        raise ConfigError("corrections.r_floor", "r grid extends below r_floor")
    f = perturb.corrected_fields(cs, r)
    _emit_csv(["r", "T0", "T1", "T2", "T_corr"],
              zip(r, f["T0"], f["T1"], f["T2"], f["T"]), args.out)


def _curves_path(out):
    if out is None:
        return Path("region_curves.csv")
    out = Path(out)
    return out.with_name(out.stem + ".curves.csv")


def cmd_region(cfg, args):
    sol = cfg.solution_obj()
    spec = cfg.region_spec()
    model = cfg.potential()
    num = cfg.numerics
    grid = regions.region_grid(sol, spec)
    bounds = regions.boundary_curves(sol, spec)
    phase = regions.phase_curves(sol, model, num.phase_r_floor, num.phase_r_ceil)
    report = regions.physical_phase_report(sol, model, spec, curves=phase)

    grid_path = Path(args.out) if args.out else Path("region_grid.csv")
    with open(grid_path, "w", newline="\n") as fh:
        write_csv(["d", "t", "density_ok", "pressure_ok", "temperature_ok", "all_ok"],
                  grid.rows(), fh)
    curves_path = _curves_path(args.out)
    with open(curves_path, "w", newline="\n") as fh:
        write_csv(["label", "kind", "r_star"],
                  [(c.label, c.kind, c.r_star) for c in bounds + phase], fh)
    summary = report.to_dict()
    summary.update({
        "grid_csv": str(grid_path),
        "curves_csv": str(curves_path),
        "grid_rows": int(grid.d.size),
        "all_ok_cells": int(np.count_nonzero(grid.flags.all_ok)),
        "boundary_curves": [{"label": c.label, "r_star": c.r_star} for c in bounds],
    })
    _emit_json(summary)


def cmd_classify(cfg, args):
    gens = classify_symmetries(cfg.law(), cfg.solution.q)
    _emit_json({
        "family": cfg.medium.family,
        "q": cfg.solution.q,
        "generators": [g.to_dict() for g in gens],
        "degenerate": [f"{g.name}[row{g.row}]" for g in gens if g.degenerate],
    })


def _verify_residual(cfg):
    sol = cfg.solution_obj()
    fields = verify.fields_from_solution(sol)
    out = []
    for P in cfg.numerics.check_points:
        c = verify.convergence_orders(fields, sol.law, sol.q, P, cfg.numerics.fd_step)
        out.append({"point": P, "norms": c["norms"], "orders": c["orders"]})
    return {"check": "residual", "points": out}


def _verify_reduced(cfg):
    sol = cfg.solution_obj()
    r = np.linspace(cfg.numerics.r_min, cfg.numerics.r_max, cfg.numerics.steps)
    res1, res2 = selfsim.reduced_ode_residual(sol, r)
    worst = float(max(np.max(res1), np.max(res2)))
    return {"check": "reduced-ode", "max_residual": worst, "passed": worst < 1e-8}


def _verify_symmetry(cfg):
    sol = cfg.solution_obj()
    fields = verify.fields_from_solution(sol)
    pts = cfg.numerics.check_points
    h = cfg.numerics.fd_step
    rows = []
    for gen in classify_symmetries(sol.law, sol.q):
        if gen.degenerate:
            continue
        for lam in cfg.numerics.symmetry_lambdas:
            rep = verify.symmetry_orbit_report(fields, gen, lam, pts, sol.law, sol.q, h)
            rows.append({"generator": gen.name, "row": gen.row, "lambda": lam, **rep})
    return {"check": "symmetry", "results": rows, "passed": all(r["passed"] for r in rows)}


def _verify_order(cfg):
    cs = cfg.corrections_obj()
    pts = cfg.numerics.order_points
    h = cfg.numerics.order_fd_step
    with_corr = perturb.correction_order_check(cs, pts, h=h)
    without = perturb.correction_order_check(cs, pts, include_corrections=False, h=h)
    return {"check": "order", "with_corrections": with_corr, "corrections_suppressed": without,
            "passed": with_corr["passed"]}


VERIFY = {
    "residual": _verify_residual,
    "symmetry": _verify_symmetry,
    "reduced-ode": _verify_reduced,
    "order": _verify_order,
}


def cmd_verify(cfg, args):
    _emit_json(VERIFY[args.check](cfg))


COMMANDS = {
    "state": cmd_state,
    "solve": cmd_solve,
    "correct": cmd_correct,
    "region": cmd_region,
    "classify": cmd_classify,
    "verify": cmd_verify,
}


def build_parser():
    parser = argparse.ArgumentParser(prog="filtrate", description=__doc__.split("\n\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="JSON run configuration (default: methane example)")
        p.add_argument("--out", help="output file (CSV commands)")
        if name == "state":
            p.add_argument("--v", type=float)
            p.add_argument("--T", type=float)
        if name in ("solve", "correct"):
            p.add_argument("--r-min", type=float)
            p.add_argument("--r-max", type=float)
            p.add_argument("--steps", type=int)
        if name == "verify":
            p.add_argument("--check", choices=sorted(VERIFY), default="residual")
    return parser


def _fail(code, kind, message, key=None):
    err = {"error": kind, "message": message}
    if key is not None:
        err["key"] = key
    sys.stderr.write(json.dumps(err, sort_keys=True) + "\n")
    return code


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        cfg = load_config(args.config) if args.config else parse_config(METHANE_EXAMPLE)
        COMMANDS[args.command](cfg, args)
    except ConfigError as exc:
        return _fail(1, "invalid_input", exc.message, exc.key)
    except thermo.ThermoDomainError as exc:
        return _fail(1, "invalid_input", str(exc))
    except NUMERIC_ERRORS as exc:
        return _fail(2, "numeric_failure", str(exc))
    except ValueError as exc:
        return _fail(1, "invalid_input", str(exc))
    return 0


if __name__ == "__main__":
    sys.exit(main())
