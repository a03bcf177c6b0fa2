"""Command-line front end: figure reproductions, custom sweeps and the oracle suite."""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

import numpy as np

from .checks import format_table, resolvent_ratio_check, run_verification
from .core import PARAM_KEYS, ParameterError, fig_params, load_params
from .oracles import meanfield_fixed_point
from .spectrum import DEFAULT_MODE, MODES, sweep
from .steady_state import SolverError, solve_beta

FIG_N_VALUES = tuple(int(round(x)) for x in np.logspace(1, 4, 13))
FIG_KAPPA_VALUES = tuple(float(k) for k in np.round(np.linspace(0.0, 0.2, 21), 12))
DEFAULT_GRID = "-50:50:2001"


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.17g}"
    return str(v)


def parse_grid(spec: str) -> np.ndarray:
    try:
        lo, hi, n = spec.split(":")
        lo, hi, n = float(lo), float(hi), int(n)
    except ValueError:
        raise ParameterError(f"grid must be lo:hi:n, got {spec!r}") from None
    if not (np.isfinite(lo) and np.isfinite(hi)) or hi <= lo or n < 2:
        raise ParameterError(f"invalid grid {spec!r}")
    return np.linspace(lo, hi, n)


def parse_values(spec: str, variable: str) -> list:
    """``v1,v2,...`` or ``lo:hi:count`` (add ``:log`` for log spacing)."""
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) not in (3, 4) or (len(parts) == 4 and parts[3] != "log"):
            raise ParameterError(f"range must be lo:hi:count[:log], got {spec!r}")
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
        if count < 1:
            raise ParameterError("range count must be positive")
        vals = np.geomspace(lo, hi, count) if len(parts) == 4 else np.linspace(lo, hi, count)
    else:
        vals = [float(v) for v in spec.split(",") if v.strip()]
    if len(vals) == 0:
        raise ParameterError("sweep values are empty")
    if variable == "N":
        out = []
        for v in vals:  # keep order, drop duplicates created by rounding
            n = int(round(v))
            if n not in out:
                out.append(n)
        return out
    return [float(v) for v in vals]


def _header(writer_lines, cfg: dict):
    for k, v in cfg.items():
        writer_lines.append(f"# {k} = {_fmt(v)}")


def write_csv(path: Path, cfg: dict, columns, rows) -> None:
    lines = []
    _header(lines, cfg)
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([_fmt(r[c]) for c in columns])


def _resolved_config(args, p, extra) -> dict:
    cfg = {"command": args.command}
    cfg.update(extra)
    for k in PARAM_KEYS:
        cfg[k] = getattr(p, k)
    cfg.update({"grid": args.grid, "mode": args.mode, "seed": args.seed, "oracles": args.oracles})
    return cfg


def _base_params(args, n_default=100):
    if args.config:
        return load_params(args.config)
    return fig_params(n_default, 0.0)


def _deviation_rows(points, variable):
    rows = []
    for p in points:
        row = {"N": p.n_atoms, "kappa": p.kappa}
        try:
            ss = solve_beta(p)
            row.update(dev=ss.deviation, beta_re=ss.beta.real, beta_im=ss.beta.imag,
                       residual=ss.residual_norm, status="ok")
        except SolverError as exc:
            row.update(dev=float("nan"), beta_re=exc.beta.real, beta_im=exc.beta.imag,
                       residual=exc.residual, status="solver_failed")
        rows.append(row)
    return rows


DEV_COLUMNS = ("N", "kappa", "dev", "beta_re", "beta_im", "residual", "status")
SPECTRUM_COLUMNS = ("N", "kappa", "omega_over_gamma", "S", "S_normalized", "stable", "mode")
ORACLE_COLUMNS = ("source", "check", "observed", "expected", "tolerance", "passed", "detail")


def _oracle_rows(results):
    return [{"source": r.source, "check": r.name, "observed": r.observed, "expected": r.expected,
             "tolerance": r.tolerance, "passed": r.passed, "detail": r.detail} for r in results]


def _oracle_path(out: Path) -> Path:
    return out.with_name(out.stem + "_oracles" + out.suffix)


def _spectrum_table(points, variable, args, grid):
    table = sweep(points, variable, grid, args.mode, args.workers)
    failed = {v for v, _ in table.failures}
    rows = list(table.rows())
    for p in points:  # solver failures are kept as status rows
        key = p.n_atoms if variable == "N" else p.kappa
        if key in failed:
            rows.append({"N": p.n_atoms, "kappa": p.kappa, "omega_over_gamma": float("nan"),
                         "S": float("nan"), "S_normalized": float("nan"), "stable": -1,
                         "mode": args.mode})
    return table, rows


def _run_points(args, p0, points, variable, label, grid):
    out = Path(args.out or f"{label}.csv")
    values = [p.n_atoms if variable == "N" else p.kappa for p in points]
    cfg = _resolved_config(args, p0, {"figure": label, "variable": variable,
                                      "values": ",".join(_fmt(v) for v in values)})
    if label in ("fig1", "fig2"):
        rows = _deviation_rows(points, variable)
        write_csv(out, cfg, DEV_COLUMNS, rows)
        if args.oracles == "on":
            from .checks import CheckResult
            results = []
            for p, r in zip(points, rows):
                if r["status"] != "ok":
                    continue
                beta = complex(r["beta_re"], r["beta_im"])
                fp = meanfield_fixed_point(p, solve_beta(p).beta0)
                err = abs(fp - beta)
                results.append(CheckResult(f"meanfield_fixed_point[N={p.n_atoms},kappa={p.kappa:g}]",
                                           "meanfield", err, 0.0, 1e-8, err <= 1e-8))
            write_csv(_oracle_path(out), cfg, ORACLE_COLUMNS, _oracle_rows(results))
    else:
        table, rows = _spectrum_table(points, variable, args, grid)
        write_csv(out, cfg, SPECTRUM_COLUMNS, rows)
        if args.oracles == "on":
            stable = [r.params for r in table.results if r.stable]
            results = resolvent_ratio_check(stable, grid, args.mode)
            write_csv(_oracle_path(out), cfg, ORACLE_COLUMNS, _oracle_rows(results))
    print(f"wrote {out}")
    return 0


def cmd_fig(args) -> int:
    grid = parse_grid(args.grid)
    n = args.number
    if n in (1, 3):
        p0 = _base_params(args).with_(kappa=0.0)
        values = parse_values(args.values, "N") if args.values else FIG_N_VALUES
        points = [p0.with_(n_atoms=v) for v in values]
        variable = "N"
    else:
        p0 = _base_params(args)
        values = parse_values(args.values, "kappa") if args.values else FIG_KAPPA_VALUES
        points = [p0.with_(kappa=v) for v in values]
        variable = "kappa"
    return _run_points(args, p0, points, variable, f"fig{n}", grid)


def cmd_sweep(args) -> int:
    p0 = _base_params(args)
    if args.variable == "omega":
        if args.values:
            vals = np.array(parse_values(args.values, "omega"))
            if np.any(np.diff(vals) <= 0):
                raise ParameterError("omega values must be strictly increasing")
            args.grid = f"explicit[{len(vals)}]"
            grid = vals
        else:
            grid = parse_grid(args.grid)
        return _run_points(args, p0, [p0], "N", "sweep", grid)
    if not args.values:
        raise ParameterError("sweep over N or kappa needs --values")
    values = parse_values(args.values, args.variable)
    key = "n_atoms" if args.variable == "N" else "kappa"
    points = [p0.with_(**{key: v}) for v in values]
    return _run_points(args, p0, points, args.variable, "sweep", parse_grid(args.grid))


def cmd_verify(args) -> int:
    p = load_params(args.config) if args.config else None
    results = run_verification(p, seed=args.seed, mode=args.mode, grid=parse_grid(args.grid),
                               corrupt_b=args.corrupt_b)
    out = Path(args.out or "verify.csv")
    base = p if p is not None else fig_params(100, 0.05)
    cfg = _resolved_config(args, base, {"corrupt_b": float(args.corrupt_b)})
    write_csv(out, cfg, ORACLE_COLUMNS, _oracle_rows(results))
    print(format_table(results))
    failed = [r for r in results if not r.passed]
    for r in failed:
        print(f"FAILED {r.name}: observed {r.observed:.6g}, expected {r.expected:.6g} "
              f"within {r.tolerance:.3g} {r.detail}".rstrip(), file=sys.stderr)
    print(f"wrote {out}")
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key = value parameter file")
    common.add_argument("--out", help="output CSV path")
    common.add_argument("--mode", choices=MODES, default=DEFAULT_MODE)
    common.add_argument("--grid", default=DEFAULT_GRID, help="frequency grid lo:hi:n in units of gamma")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--oracles", choices=("on", "off"), default="off")

    ap = argparse.ArgumentParser(prog="fdbec", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)
    f = sub.add_parser("fig", parents=[common], help="reproduce one figure as CSV")
    f.add_argument("number", type=int, choices=(1, 2, 3, 4))
    f.add_argument("--values", help="override the axis values (v1,v2 or lo:hi:count[:log])")
    s = sub.add_parser("sweep", parents=[common], help="custom sweep over N, kappa or omega")
    s.add_argument("--variable", choices=("N", "kappa", "omega"), required=True)
    s.add_argument("--values", help="v1,v2,... or lo:hi:count[:log]")
    v = sub.add_parser("verify", parents=[common], help="run the oracle cross-check suite")
    v.add_argument("--corrupt-b", type=float, default=0.0, help=argparse.SUPPRESS)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.workers < 1:
        ap.error("--workers must be at least 1")
    if args.out:
        parent = Path(args.out).resolve().parent
        if not parent.is_dir():
            print(f"error: output directory {parent} does not exist", file=sys.stderr)
            return 2
    try:
        if args.command == "fig":
            return cmd_fig(args)
        if args.command == "sweep":
            return cmd_sweep(args)
        return cmd_verify(args)
    except (ParameterError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
