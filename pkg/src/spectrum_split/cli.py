"""Command-line front end.

Exit codes: 0 success, 2 usage or validation error, 3 simulator failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import __version__, analytic, experiments, lattice
from .errors import (
    DomainError,
    InsufficientTruncationError,
    NoiseInfeasibleError,
    SimulationError,
    ThresholdOverflowError,
)
from .params import NetworkParams, linear_to_db
from .simulator import FadingModel, SimConfig, estimate_outage, solve_capacity

PROG = "spectrum-split"
EXIT_USAGE = 2
EXIT_RUNTIME = 3


class UsageError(Exception):
    pass


def _snr_db(text: str) -> float:
    if text.strip().lower() in ("inf", "+inf", "infinity"):
        return math.inf
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number or 'inf', got {text!r}") from None


def _float_list(text: str) -> tuple:
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _jsonable(value):
    if isinstance(value, float) and math.isinf(value):
        return "inf" if value > 0 else "-inf"
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def _from_jsonable(value):
    if value == "inf":
        return math.inf
    return value


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # one-line diagnostic, no usage dump
        self.exit(EXIT_USAGE, f"{PROG}: error: {message}\n")


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--output", choices=("human", "json", "csv"), default="human")
    p.add_argument("--seed", type=int, default=0, help="master seed (unsigned 64-bit)")
    return p


def _add_util(p: argparse.ArgumentParser):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--util", type=float, help="spectral utilization R/W in bps/Hz")
    g.add_argument("--rate", type=float, help="per-link rate R in bits/sec (with --bandwidth)")
    p.add_argument("--bandwidth", type=float, default=1.0, help="total bandwidth W in Hz")


def _add_network(p: argparse.ArgumentParser, snr: bool = True):
    p.add_argument("--alpha", type=float, help="path-loss exponent (> 2)")
    p.add_argument("--d", type=float, default=10.0, help="link distance in meters")
    p.add_argument("--eps", type=float, default=0.1, help="outage constraint in (0, 1)")
    p.add_argument("--rho", type=float, default=1.0, help="transmit power in watts")
    _add_util(p)
    if snr:
        p.add_argument("--snr-db", type=_snr_db, default=math.inf, help="full-band SNR in dB, or 'inf'")


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog=PROG, description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("optimal", parents=[common], help="optimal spectral efficiency and band count")
    p.add_argument("--alpha", type=float, required=True)
    _add_util(p)

    p = sub.add_parser("capacity", parents=[common], help="first-order density for a band count")
    _add_network(p)
    p.add_argument("--n", type=int, help="number of sub-bands (default: optimal)")
    p.add_argument("--gamma", type=float, default=1.0, help="coding gap in (0, 1]")

    p = sub.add_parser("simulate", parents=[common], help="Monte-Carlo maximum density")
    _add_network(p)
    p.add_argument("--n", type=int, help="number of sub-bands (default: optimal)")
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--trials", type=int, default=200_000)
    p.add_argument("--window-radius", type=float, help="simulation disk radius in meters")
    p.add_argument("--fading", choices=[f.value for f in FadingModel], default="pathloss")
    p.add_argument("--outage-at", type=float, metavar="LAMBDA",
                   help="only estimate outage at this total intensity (per m^2)")
    p.add_argument("--replay", type=Path, help="re-run the inputs of a previous JSON output")

    p = sub.add_parser("sweep", parents=[common], help="regenerate a figure table")
    p.add_argument("--figure", choices=[f.value for f in experiments.Figure], default="fig2")
    p.add_argument("--out", type=Path, help="CSV path; a JSON sidecar is written next to it")
    p.add_argument("--alphas", type=_float_list, default=(4.0,))
    p.add_argument("--utils", type=_float_list, default=(0.25, 0.5))
    p.add_argument("--n-min", type=int, default=1)
    p.add_argument("--n-max", type=int, default=20)
    p.add_argument("--d", type=float, default=10.0)
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--trials", type=int, default=200_000)
    p.add_argument("--fading", choices=[f.value for f in FadingModel], default="pathloss")
    p.add_argument("--no-mc", action="store_true", help="skip Monte-Carlo columns")
    p.add_argument("--replay", type=Path, help="re-run the sweep described by a JSON sidecar")

    p = sub.add_parser("bounds", parents=[common], help="deterministic-placement bounds")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--d", type=float, default=10.0)
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--b", type=float, help="spectral efficiency (default: optimal)")
    p.add_argument("--truncation-cells", type=int, default=lattice.DEFAULT_TRUNCATION)

    p = sub.add_parser("ds", parents=[common], help="frequency split versus direct sequence")
    _add_network(p, snr=False)
    p.add_argument("--n-max", type=int, default=20)
    return parser


def _util(args) -> float:
    if args.util is None and args.rate is None:
        raise UsageError("one of --util or --rate is required")
    if args.bandwidth <= 0:
        raise DomainError("bandwidth must be positive")
    util = args.util if args.util is not None else args.rate / args.bandwidth
    if not util > 0:
        raise DomainError("util must be positive")
    return util


def _network(args, snr_db: Optional[float] = math.inf) -> NetworkParams:
    if args.alpha is None:
        raise UsageError("--alpha is required")
    snr = None if snr_db is None or math.isinf(snr_db) else snr_db
    if snr_db is not None and snr_db == -math.inf:
        raise DomainError("snr_db must be finite or +inf")
    return NetworkParams.from_util(
        alpha=args.alpha, d=args.d, util=_util(args), snr_db=snr, rho=args.rho, w=args.bandwidth
    )


def _check_eps(eps: float):
    if not 0.0 < eps < 1.0:
        raise DomainError("eps must lie in (0, 1)")


def _check_seed(seed: int):
    if not 0 <= seed < 2 ** 64:
        raise DomainError("seed must be an unsigned 64-bit integer")


# ---- commands: each returns (record, table_rows or None, columns) ----


def cmd_optimal(args):
    if args.alpha <= 2:
        raise DomainError("alpha must exceed 2")
    record = analytic.optimum_summary(args.alpha, _util(args))
    return record, None, None


def cmd_capacity(args):
    _check_eps(args.eps)
    params = _network(args, args.snr_db)
    n = args.n if args.n is not None else analytic.optimal_band_count(params).n_star
    plan = analytic.gap_adjusted_threshold(params, n, args.gamma)
    clean = NetworkParams(alpha=params.alpha, d=params.d, rho=params.rho, n0=0.0, w=params.w, r=params.r)
    record = {
        "alpha": params.alpha,
        "d": params.d,
        "eps": args.eps,
        "util": params.util,
        "snr_db": args.snr_db,
        "gamma": args.gamma,
        "n": plan.n,
        "b": plan.b,
        "beta": plan.beta,
        "beta_db": plan.beta_db,
        "lambda_approx": analytic.capacity_from_plan(params, plan, args.eps).lam,
        "lambda_interference_limited": analytic.capacity_from_plan(clean, plan, args.eps).lam,
    }
    return record, None, None


def _simulate_inputs(args) -> dict:
    return {
        "alpha": args.alpha,
        "d": args.d,
        "eps": args.eps,
        "rho": args.rho,
        "util": _util(args),
        "bandwidth": args.bandwidth,
        "snr_db": args.snr_db,
        "n": args.n,
        "gamma": args.gamma,
        "trials": args.trials,
        "window_radius": args.window_radius,
        "fading": args.fading,
        "outage_at": args.outage_at,
        "seed": args.seed,
    }


def cmd_simulate(args):
    if args.replay is not None:
        raw = json.loads(args.replay.read_text())
        inputs = {k: _from_jsonable(v) for k, v in raw.get("inputs", raw).items()}
        for key, value in inputs.items():
            setattr(args, key.replace("-", "_"), value)
        args.rate = None
    _check_eps(args.eps)
    _check_seed(args.seed)
    params = _network(args, args.snr_db)
    cfg = SimConfig(trials=args.trials, window_radius=args.window_radius, master_seed=args.seed)
    n = args.n if args.n is not None else analytic.optimal_band_count(params).n_star
    args.n = n
    inputs = _simulate_inputs(args)
    fading = FadingModel(args.fading)
    plan = analytic.gap_adjusted_threshold(params, n, args.gamma)
    record = {"inputs": inputs, "beta": plan.beta, "beta_db": plan.beta_db}
    if args.outage_at is not None:
        est = estimate_outage(params, plan, args.outage_at, fading, cfg)
        record.update(p_out=est.p_out, p_out_stderr=est.stderr)
    else:
        result = solve_capacity(params, n, args.eps, fading, cfg, gamma=args.gamma)
        analytic_lam = result.info["analytic_lambda"]
        record.update(
            {
                "lambda": result.lam,
                "stderr": result.stderr,
                "analytic_lambda": analytic_lam,
                "ratio_to_analytic": result.lam / analytic_lam,
                "bracket": result.info["bracket"],
                "iterations": result.info["iterations"],
                "window_radius": result.info["window_radius"],
            }
        )
    return record, None, None


def cmd_sweep(args):
    if args.replay is not None:
        spec = experiments.load_sidecar(args.replay)
        if args.out is not None:
            spec = experiments.replace(spec, output_path=str(args.out))
    else:
        _check_eps(args.eps)
        _check_seed(args.seed)
        try:
            grid = experiments.SweepGrid(
                alphas=args.alphas,
                utils=args.utils,
                n_min=args.n_min,
                n_max=args.n_max,
                d=args.d,
                epsilon=args.eps,
                fading=args.fading,
            )
        except ValueError as exc:
            raise DomainError(str(exc)) from None
        spec = experiments.SweepSpec(
            figure=experiments.Figure(args.figure),
            grid=grid,
            sim=SimConfig(trials=args.trials, master_seed=args.seed),
            output_path=str(args.out) if args.out else None,
            monte_carlo=not args.no_mc,
        )
    rows = experiments.run_sweep(spec)
    columns = experiments.COLUMNS[spec.figure]
    record = {"figure": spec.figure.value, "rows": len(rows), "seed": spec.sim.master_seed}
    if spec.output_path:
        path = experiments.write_sweep(spec, rows)
        record.update(csv=str(path), sidecar=str(experiments.sidecar_path(path)))
    return record, rows, columns


def cmd_bounds(args):
    _check_eps(args.eps)
    params = NetworkParams(alpha=args.alpha, d=args.d)
    b = args.b if args.b is not None else analytic.optimal_spectral_efficiency(args.alpha)
    upper = lattice.det_upper_bound(params, b).lam
    lat = lattice.lattice_max_density(params, b, truncation_cells=args.truncation_cells)
    ran = lattice.random_density(params, b, args.eps).lam
    record = {
        "alpha": params.alpha,
        "d": params.d,
        "eps": args.eps,
        "b": b,
        "beta_db": linear_to_db(analytic.threshold_from_efficiency(b)),
        "det_upper_lambda": upper,
        "lattice_lambda": lat.lam,
        "lattice_spacing": lat.info["spacing"],
        "lattice_sir_db": linear_to_db(lat.info["sir"]),
        "random_lambda": ran,
        "upper_over_lattice": upper / lat.lam,
        "random_over_upper": ran / upper,
    }
    return record, None, None


def cmd_ds(args):
    _check_eps(args.eps)
    params = _network(args, None)
    grid = experiments.SweepGrid(
        alphas=(params.alpha,), utils=(params.util,), n_max=args.n_max, d=params.d, epsilon=args.eps
    )
    rows = experiments.run_ds_compare(experiments.SweepSpec(experiments.Figure.DS_COMPARE, grid))
    record = {"alpha": params.alpha, "util": params.util, "eps": args.eps, "rows": len(rows)}
    return record, rows, experiments.DS_COLUMNS


COMMANDS = {
    "optimal": cmd_optimal,
    "capacity": cmd_capacity,
    "simulate": cmd_simulate,
    "sweep": cmd_sweep,
    "bounds": cmd_bounds,
    "ds": cmd_ds,
}


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, dict):
        return ", ".join(f"{k}={_fmt(v)}" for k, v in value.items())
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_fmt(v) for v in value) + "]"
    return str(value)


def _render(mode: str, command: str, record: dict, rows, columns) -> str:
    if mode == "json":
        payload = {"command": command, "version": __version__, **record}
        if rows is not None:
            payload["table"] = rows
        return json.dumps(_jsonable(payload), indent=2, sort_keys=True, allow_nan=False) + "\n"
    if mode == "csv":
        if rows is not None:
            return experiments.table_to_csv(rows, columns)
        flat = {k: v for k, v in record.items() if not isinstance(v, (dict, list))}
        if "inputs" in record:
            flat = {**record["inputs"], **flat}
        return experiments.table_to_csv([flat], list(flat))
    lines = [f"{key}: {_fmt(value)}" for key, value in record.items()]
    if rows is not None:
        lines.append(" ".join(columns))
        for row in rows:
            lines.append(" ".join(_fmt(row[c]) if row[c] is not None else "-" for c in columns))
    return "\n".join(lines) + "\n"


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        record, rows, columns = COMMANDS[args.command](args)
    except (UsageError, DomainError, ThresholdOverflowError, NoiseInfeasibleError) as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SimulationError, InsufficientTruncationError) as exc:
        print(f"{PROG}: failed: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    sys.stdout.write(_render(args.output, args.command, record, rows, columns))
    return 0


if __name__ == "__main__":
    sys.exit(main())
