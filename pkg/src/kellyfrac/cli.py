"""Command-line interface.

Every subcommand writes CSV or JSON. Exit codes: 0 success, 1 domain or
parse error, 2 usage error. ``--config FILE`` loads a JSON object whose keys
are flag names (dashes or underscores) and act as defaults for that run.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from .constraints import (
    Hypercube,
    Hypersphere,
    Interval,
    support_function,
    sphere_constraint_boundary,
)
from .distributions import (
    empirical_from_samples,
    parse_model_spec,
    read_samples_csv,
    support_extremes,
)
from .errors import DomainError
from .ingest import gbm_ticks, matched_drift, read_prices_csv, returns_from_prices, summary_stats
from .optimizer import OptimizerConfig, merton_fraction, optimize, optimize_scalar, theoretical_kelly
from .simulator import mu_grid, run_comparison, sweep_kelly_vs_mu, write_sweep_csv


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _default_seed() -> int:
    raw = os.environ.get("KELLY_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        return 0


def _emit_json(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=2) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _open_out(out: str | None):
    if out:
        return open(out, "w", encoding="utf-8", newline="")
    return None


def _config(args) -> OptimizerConfig:
    return OptimizerConfig(cap=args.cap, tol_k=args.tol)


# --- subcommands -----------------------------------------------------------


def cmd_optimize(args) -> int:
    cfg = _config(args)
    if args.spec:
        result = theoretical_kelly(parse_model_spec(args.spec), cfg)
    elif args.samples:
        with open(args.samples, encoding="utf-8") as fh:
            dist = empirical_from_samples(read_samples_csv(fh))
        result = optimize(dist, cfg)
    else:
        raise DomainError("optimize needs --spec or --samples")
    _emit_json(result.to_json(), args.out)
    return 0


def cmd_fit(args) -> int:
    with open(args.samples, encoding="utf-8") as fh:
        samples = read_samples_csv(fh)
    dist = empirical_from_samples(samples)
    lo, hi = support_extremes(dist)
    _emit_json(
        {
            "m": len(samples),
            "dim": dist.dim,
            "n_atoms": dist.size,
            "mean": dist.mean().tolist(),
            "x_min": lo.tolist(),
            "x_max": hi.tolist(),
        },
        args.out,
    )
    return 0


def _support_set(args):
    if args.set == "interval":
        if args.lo is None or args.hi is None:
            raise DomainError("--set interval needs --lo and --hi")
        return Interval(args.lo, args.hi)
    if args.set == "cube":
        if args.center is None or args.half_widths is None:
            raise DomainError("--set cube needs --center and --half-widths")
        return Hypercube(args.center, args.half_widths)
    if args.center is None or args.r is None:
        raise DomainError("--set sphere needs --center and --r")
    return Hypersphere(args.center, args.r)


def cmd_constrain(args) -> int:
    if args.boundary:
        if args.set != "sphere" or args.center is None or args.r is None:
            raise DomainError("--boundary needs --set sphere with --center and --r")
        poly = sphere_constraint_boundary(args.center, args.r, args.n_points)
        fh = _open_out(args.out)
        try:
            poly.write_csv(fh or sys.stdout)
        finally:
            if fh:
                fh.close()
        return 0
    if args.k is None:
        raise DomainError("constrain needs --k (or --boundary)")
    sset = _support_set(args)
    h = support_function(sset, -np.asarray(args.k))
    feasible = bool(h <= 1.0)
    _emit_json(
        {
            "set": args.set,
            "k": args.k,
            "h_neg_k": "inf" if h == float("inf") else h,
            "feasible": feasible,
            "verdict": "feasible" if feasible else "infeasible",
        },
        args.out,
    )
    return 0


def cmd_simulate(args) -> int:
    report = run_comparison(
        parse_model_spec(args.spec), args.m, args.n_future, args.seed, _config(args)
    )
    _emit_json(report.to_json(), args.out)
    return 0


def cmd_sweep_mu(args) -> int:
    rows = sweep_kelly_vs_mu(
        mu_grid(args.start, args.stop, args.step), args.sigma, args.m, args.seed, _config(args)
    )
    fh = _open_out(args.out)
    try:
        write_sweep_csv(rows, fh or sys.stdout)
    finally:
        if fh:
            fh.close()
    return 0


def cmd_sphere_sets(args) -> int:
    if args.out_dir:
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        for r in args.radii:
            poly = sphere_constraint_boundary(args.center, r, args.n_points)
            with open(out_dir / f"sphere_r{r:g}.csv", "w", encoding="utf-8", newline="") as fh:
                poly.write_csv(fh)
        return 0
    sys.stdout.write("r,theta,k1,k2\n")
    for r in args.radii:
        poly = sphere_constraint_boundary(args.center, r, args.n_points)
        for t, (a, b) in zip(poly.theta, poly.points):
            sys.stdout.write(f"{r!r},{float(t)!r},{float(a)!r},{float(b)!r}\n")
    return 0


def cmd_ticks(args) -> int:
    if args.prices:
        with open(args.prices, "rb") as fh:
            ticks = read_prices_csv(fh, label=args.prices)
        drift = None
    elif args.synthetic:
        drift = args.mu_tick
        if drift is None:
            drift = matched_drift(args.target_fraction, args.sigma_tick, args.m, args.seed)
        ticks = gbm_ticks(args.s0, drift, args.sigma_tick, args.m, args.seed)
    else:
        raise DomainError("ticks needs --prices FILE or --synthetic")
    returns = returns_from_prices(ticks)
    stats = summary_stats(returns)
    result = optimize_scalar(empirical_from_samples(returns), _config(args))
    payload = {"stats": stats.to_json(), "k_star": result.k, "g_star": result.g_star}
    payload["merton_fraction"] = (
        merton_fraction(stats.mu_hat, stats.sigma_hat) if stats.sigma_hat > 0 else None
    )
    if drift is not None:
        payload["mu_tick"] = drift
    _emit_json(payload, args.out)
    return 0


# --- parser ------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def _add_opt_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--cap", type=float, default=1.0, help="leverage cap |K_i| <= cap (default 1)")
    p.add_argument("--tol", type=float, default=1e-10, help="fraction tolerance (default 1e-10)")


def _add_seed(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--seed", type=int, default=_default_seed(), help="RNG seed (default $KELLY_SEED or 0)"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="kellyfrac", description="Kelly bet sizing from theory and data.")
    parser.add_argument("--config", help="JSON file of flag defaults")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser, required=True)

    p = sub.add_parser("optimize", help="optimal fraction for samples or a model")
    p.add_argument("--samples", help="sample CSV (one d-dimensional sample per row)")
    p.add_argument("--spec", help="model, e.g. coin:0.75, toy:0.001,100, normal:4,1, pathological:0.5,100")
    _add_opt_flags(p)
    p.add_argument("--out", help="write JSON here instead of stdout")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("fit", help="summarize the empirical distribution of a sample CSV")
    p.add_argument("--samples", required=True, help="sample CSV")
    p.add_argument("--out", help="write JSON here instead of stdout")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("constrain", help="support-function feasibility of a fraction vector")
    p.add_argument("--set", choices=("interval", "cube", "sphere"), required=True)
    p.add_argument("--lo", type=float, help="interval lower end")
    p.add_argument("--hi", type=float, help="interval upper end")
    p.add_argument("--center", type=_floats, help="cube/sphere center, comma-separated")
    p.add_argument("--half-widths", type=_floats, help="cube half widths, comma-separated")
    p.add_argument("--r", type=float, help="sphere radius")
    p.add_argument("--k", type=_floats, help="fraction vector, comma-separated")
    p.add_argument("--boundary", action="store_true", help="emit the sphere constraint boundary CSV")
    p.add_argument("--n-points", type=int, default=360, help="boundary points (default 360)")
    p.add_argument("--out", help="output file instead of stdout")
    p.set_defaults(func=cmd_constrain)

    p = sub.add_parser("simulate", help="theory vs empirical bettor on the same future")
    p.add_argument("--spec", required=True, help="model, e.g. toy:1e-6,100")
    p.add_argument("--m", type=int, default=50, help="estimation samples (default 50)")
    p.add_argument("--n-future", type=int, default=1000, help="future bets (default 1000)")
    _add_seed(p)
    _add_opt_flags(p)
    p.add_argument("--out", help="write JSON here instead of stdout")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep-mu", help="empirical Kelly fraction versus mean (CSV mu,k_hat)")
    p.add_argument("--from", dest="start", type=float, default=0.0, help="first mu (default 0)")
    p.add_argument("--to", dest="stop", type=float, default=4.0, help="last mu (default 4)")
    p.add_argument("--step", type=float, default=0.25, help="grid step (default 0.25)")
    p.add_argument("--sigma", type=float, default=1.0, help="standard deviation (default 1)")
    p.add_argument("--m", type=int, default=100_000, help="samples per mu (default 100000)")
    _add_seed(p)
    _add_opt_flags(p)
    p.add_argument("--out", help="output CSV instead of stdout")
    p.set_defaults(func=cmd_sweep_mu)

    p = sub.add_parser("sphere-sets", help="boundaries of r||K|| - K.x0 <= 1 for several radii")
    p.add_argument("--center", type=_floats, default=[0.5, 0.5], help="x0 (default 0.5,0.5)")
    p.add_argument("--radii", type=_floats, default=[1, 1.25, 2, 3, 5], help="radii (default 1,1.25,2,3,5)")
    p.add_argument("--n-points", type=int, default=360, help="points per curve (default 360)")
    p.add_argument("--out-dir", help="write sphere_r<r>.csv files here; default is one CSV on stdout")
    p.set_defaults(func=cmd_sphere_sets)

    p = sub.add_parser("ticks", help="return stats, empirical and Merton fractions for tick prices")
    p.add_argument("--prices", help="timestamp,price CSV")
    p.add_argument("--synthetic", action="store_true", help="use geometric-Brownian ticks")
    p.add_argument("--s0", type=float, default=100.0, help="initial price (default 100)")
    p.add_argument("--mu-tick", type=float, help="per-tick log drift (default: matched to --target-fraction)")
    p.add_argument("--sigma-tick", type=float, default=1.405e-4, help="per-tick volatility (default 1.405e-4)")
    p.add_argument("--target-fraction", type=float, default=0.825, help="sample mu/sigma^2 to match (default 0.825)")
    p.add_argument("--m", type=int, default=110_000, help="tick count (default 110000)")
    _add_seed(p)
    _add_opt_flags(p)
    p.add_argument("--out", help="write JSON here instead of stdout")
    p.set_defaults(func=cmd_ticks)
    return parser


def _apply_config(parser: argparse.ArgumentParser, argv: Sequence[str]) -> None:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    try:
        with open(known.config, encoding="utf-8") as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise DomainError(f"cannot read config {known.config!r}: {exc}") from exc
    if not isinstance(raw, dict):
        raise DomainError("config file must hold a JSON object")
    defaults = {}
    for key, value in raw.items():
        key = key.replace("-", "_")
        if key == "from":
            key = "start"
        elif key == "to":
            key = "stop"
        if isinstance(value, list):
            value = [float(v) for v in value]
        defaults[key] = value
    subparsers = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    for sp in subparsers.choices.values():
        for action in sp._actions:
            if action.dest in defaults:
                action.required = False
        known_dests = {a.dest for a in sp._actions}
        sp.set_defaults(**{k: v for k, v in defaults.items() if k in known_dests})


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        _apply_config(parser, argv)
        args = parser.parse_args(argv)
        return args.func(args)
    except (DomainError, OSError) as exc:
        message = " ".join(str(exc).split())
        print(f"error: {message}", file=sys.stderr)
        return 1


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
