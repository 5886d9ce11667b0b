"""Command-line front end.

Subcommands::

    evaluate        analytic metrics and annual cost of one strategy
    simulate        Monte Carlo replications of the same strategy
    validate        model-vs-simulation error study over a sampled space
    optimize        genetic search for the cheapest feasible strategy
    sensitivity     optimized two-echelon vs single-echelon cost sweep
    fit-launch-data mean gap of a launch-date series

Every command reads one JSON config (``--config``, defaulting to the
bundled example) and writes CSV files under ``--out``. Output is fully
deterministic for a given config and seed: repeated runs produce byte
identical files, and ``--format csv`` prints the same numbers to stdout
as the default text rendering.

Seed handling: one master seed (``--seed``, else the config's ``seed``)
is decorrelated per command by spawning a child sequence with the
command's fixed index (simulate 1, validate 2, optimize 3, sensitivity
4). Stochastic commands then derive further streams per replication,
case, restart, or sweep point from that child. ``evaluate`` and
``fit-launch-data`` are deterministic and ignore the seed.

Exit status: 0 on success, 1 on configuration or input errors, 2 when a
requested optimization or sizing is infeasible.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from pathlib import Path

import numpy as np

from .chain import evaluate_inplane_only, evaluate_strategy
from .config import (
    ConfigError,
    RunConfig,
    bundled_case_study_path,
    bundled_launch_dates_path,
    load_run_config,
)
from .costs import tessac, tessac_inplane_only
from .optimizer import (
    OptimizationProblem,
    optimize,
    optimize_inplane_only,
    sensitivity_sweep,
)
from .orbits import CircularOrbit, hohmann_transfer
from .simulator import SimConfig, run_batch
from .validation import OUTPUT_NAMES, fit_launch_gaps, read_launch_dates, run_validation

_COMMAND_IDS = {"simulate": 1, "validate": 2, "optimize": 3, "sensitivity": 4}


def command_seed(master: int, command: str) -> int:
    """Per-command child seed derived from the master seed."""
    ss = np.random.SeedSequence(master, spawn_key=(_COMMAND_IDS[command],))
    return int(ss.generate_state(1, np.uint64)[0])


def _fmt(value) -> str:
    # repr keeps full precision so CSV round-trips exactly
    if isinstance(value, float):
        return repr(value)
    if value is None:
        return ""
    return str(value)


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(x) for x in row])


def _emit(fmt: str, header: list[str], rows: list[list]) -> None:
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(x) for x in row])
        sys.stdout.write(buf.getvalue())
    elif len(rows) == 1:
        for name, value in zip(header, rows[0]):
            print(f"{name:<28} {_fmt(value)}")
    else:
        print(" ".join(header))
        for row in rows:
            print(" ".join(_fmt(x) for x in row))


def _strategy_fields(strategy) -> tuple[list[str], list]:
    names = ["n_parking", "h_parking_km", "q_plane", "s_plane", "k_q_parking", "k_s_parking"]
    return names, [getattr(strategy, n) for n in names]


_METRIC_FIELDS = [
    "lambda_plane_per_day",
    "lambda_parking_batches_per_day",
    "p_av",
    "es_plane",
    "es_parking_batches",
    "rho_plane",
    "rho_parking",
    "mean_stock_plane",
    "mean_stock_parking_batches",
    "e_leadtime_plane_days",
    "e_leadtime_parking_days",
    "neglected_supply_mass",
]


def cmd_evaluate(rc: RunConfig, args, out: Path) -> int:
    rc.require("constellation", "launch", "costs", "satellite")
    cfg = rc.constellation
    if args.inplane_only:
        rc.require("inplane_policy")
        metrics = evaluate_inplane_only(cfg, rc.inplane_policy, rc.launch)
        breakdown = tessac_inplane_only(cfg, rc.inplane_policy, metrics, rc.costs, rc.launch)
        header = ["q_plane", "s_plane"]
        row: list = [rc.inplane_policy.order_quantity_q, rc.inplane_policy.reorder_point_s]
    else:
        rc.require("strategy")
        metrics = evaluate_strategy(cfg, rc.strategy, rc.launch, consts=rc.earth)
        parking = CircularOrbit(rc.strategy.h_parking_km, cfg.inclination_deg)
        plane = CircularOrbit(cfg.h_plane_km, cfg.inclination_deg)
        transfer = hohmann_transfer(
            parking, plane, rc.satellite.m_dry_kg, rc.satellite.v_exhaust_km_s, consts=rc.earth
        )
        breakdown = tessac(cfg, rc.strategy, metrics, transfer, rc.costs, rc.launch)
        header, row = _strategy_fields(rc.strategy)
    header += _METRIC_FIELDS
    row += [getattr(metrics, n) for n in _METRIC_FIELDS]
    header += ["manufacturing", "holding", "launch", "maneuvering", "tessac"]
    row += [
        breakdown.manufacturing,
        breakdown.holding,
        breakdown.launch,
        breakdown.maneuvering,
        breakdown.tessac,
    ]
    _write_csv(out / "evaluate.csv", header, [row])
    _emit(args.format, header, [row])
    return 0


def cmd_simulate(rc: RunConfig, args, out: Path, master: int) -> int:
    rc.require("constellation", "strategy", "launch", "costs", "satellite")
    sc = SimConfig(
        constellation=rc.constellation,
        strategy=rc.strategy,
        launch=rc.launch,
        costs=rc.costs,
        satellite=rc.satellite,
        horizon_years=rc.simulation.horizon_years,
        replications=rc.simulation.replications,
        seed=command_seed(master, "simulate"),
        warmup_years=rc.simulation.warmup_years,
        capture_events=args.event_log,
        consts=rc.earth,
    )
    res = run_batch(sc, jobs=args.jobs)
    header = ["metric", "mean", "se"]
    rows = [
        ["mean_stock_plane", res.mean_stock_plane, res.se_stock_plane],
        ["mean_stock_parking_batches", res.mean_stock_parking_batches, res.se_stock_parking],
        ["rho_plane", res.rho_plane, res.se_rho_plane],
        ["rho_parking", res.rho_parking, res.se_rho_parking],
        ["tessac", res.tessac, res.se_tessac],
    ]
    _write_csv(out / "simulation_summary.csv", header, rows)
    rep_header = [
        "replication",
        "mean_stock_plane",
        "mean_stock_parking_batches",
        "rho_plane",
        "rho_parking",
        "tessac",
        "failures",
        "served",
        "backorders_end",
        "transfers",
        "ground_orders",
    ]
    rep_rows = [
        [
            i,
            r.mean_stock_plane,
            r.mean_stock_parking_batches,
            r.rho_plane,
            r.rho_parking,
            r.tessac,
            r.failures,
            r.served,
            r.backorders_end,
            r.transfers,
            r.ground_orders,
        ]
        for i, r in enumerate(res.per_replication)
    ]
    _write_csv(out / "simulation_replications.csv", rep_header, rep_rows)
    if args.event_log:
        ev_rows = [
            [i, t, what, loc, stock]
            for i, r in enumerate(res.per_replication)
            for (t, what, loc, stock) in (r.events or ())
        ]
        _write_csv(
            out / "events.csv",
            ["replication", "time_days", "event", "location", "stock_after"],
            ev_rows,
        )
    _emit(args.format, header, rows)
    return 0


def cmd_validate(rc: RunConfig, args, out: Path, master: int) -> int:
    vs = rc.validation
    n = args.n_cases if args.n_cases is not None else vs.n_cases
    reps = args.reps if args.reps is not None else vs.replications
    horizon = args.horizon if args.horizon is not None else vs.horizon_years
    warmup = args.warmup if args.warmup is not None else vs.warmup_years
    report = run_validation(
        vs.space,
        n,
        replications=reps,
        horizon_years=horizon,
        warmup_years=warmup,
        seed=command_seed(master, "validate"),
        jobs=args.jobs,
    )
    param_names = [name for name, _ in vs.space.items()]
    case_header = (
        ["case", "feasible"]
        + param_names
        + ["s_plane", "k_s_parking"]
        + [f"model_{n}" for n in OUTPUT_NAMES]
        + [f"sim_{n}" for n in OUTPUT_NAMES]
        + [f"err_pct_{n}" for n in OUTPUT_NAMES]
        + ["reason"]
    )
    case_rows = []
    for case in report.cases:
        row: list = [case.index, int(case.feasible)]
        row += [case.params[p] for p in param_names]
        row += [case.s_plane, case.k_s_parking]
        for source in (case.model_values, case.sim_values, case.errors_pct):
            row += [source.get(n) if source else None for n in OUTPUT_NAMES]
        row.append(case.reason or "")
        case_rows.append(row)
    _write_csv(out / "validation_cases.csv", case_header, case_rows)
    header = ["output", "avg_abs_error_pct"]
    rows = [[name, report.averaged_errors_pct[name]] for name in OUTPUT_NAMES]
    _write_csv(out / "validation_summary.csv", header, rows)
    _emit(args.format, header, rows)
    feasible = sum(1 for c in report.cases if c.feasible)
    print(f"cases: {feasible} feasible, {report.infeasible_count} infeasible", file=sys.stderr)
    if feasible == 0:
        return 2
    return 0


def cmd_optimize(rc: RunConfig, args, out: Path, master: int) -> int:
    rc.require("constellation", "launch", "costs", "satellite")
    prob = OptimizationProblem(
        constellation=rc.constellation,
        launch=rc.launch,
        costs=rc.costs,
        satellite=rc.satellite,
        rho_target=rc.optimization.rho_target,
        bounds=rc.optimization.bounds,
        ga=rc.optimization.ga,
        consts=rc.earth,
    )
    if args.inplane_only:
        res = optimize_inplane_only(prob)
        if not res.feasible:
            print("no feasible single-echelon policy", file=sys.stderr)
            return 2
        header = ["q_plane", "s_plane", "tessac", "fill_rate_product"]
        rows = [
            [
                res.best_policy.order_quantity_q,
                res.best_policy.reorder_point_s,
                res.best_cost,
                res.fill_rate_product,
            ]
        ]
        _write_csv(out / "optimize_inplane.csv", header, rows)
        _emit(args.format, header, rows)
        return 0
    res = optimize(prob, seed=command_seed(master, "optimize"))
    if not res.feasible:
        print("genetic search found no feasible strategy", file=sys.stderr)
        return 2
    names, values = _strategy_fields(res.best_strategy)
    header = names + ["q_parking", "tessac", "fill_rate_product"]
    rows = [values + [res.q_parking, res.best_cost, res.fill_rate_product]]
    _write_csv(out / "optimize_result.csv", header, rows)
    trace_rows = [[r, g, best, mean] for (r, g, best, mean) in res.trace]
    _write_csv(
        out / "optimize_trace.csv",
        ["restart", "generation", "best_penalized", "mean_penalized"],
        trace_rows,
    )
    _emit(args.format, header, rows)
    return 0


def cmd_sensitivity(rc: RunConfig, args, out: Path, master: int) -> int:
    rc.require("constellation", "launch", "costs", "satellite")
    try:
        rates = [float(tok) for tok in args.rates.split(",") if tok.strip()]
    except ValueError as exc:
        raise ConfigError(f"--rates: {exc}") from exc
    if not rates:
        raise ConfigError("--rates: need at least one failure rate")
    prob = OptimizationProblem(
        constellation=rc.constellation,
        launch=rc.launch,
        costs=rc.costs,
        satellite=rc.satellite,
        rho_target=rc.optimization.rho_target,
        bounds=rc.optimization.bounds,
        ga=rc.optimization.ga,
        consts=rc.earth,
    )
    points = sensitivity_sweep(prob, rates, seed=command_seed(master, "sensitivity"))
    header = [
        "lambda_sat_per_year",
        "tessac_multi",
        "tessac_inplane",
        "savings_pct",
        "n_parking",
        "h_parking_km",
        "q_plane",
        "s_plane",
        "k_q_parking",
        "k_s_parking",
        "q_inplane",
        "s_inplane",
        "error",
    ]
    rows = []
    for p in points:
        if p.error is not None:
            rows.append([p.lambda_sat_per_year] + [None] * 11 + [p.error])
            continue
        names, values = _strategy_fields(p.best_strategy)
        rows.append(
            [p.lambda_sat_per_year, p.tessac_multi, p.tessac_inplane, p.savings_pct]
            + values
            + [p.best_policy.order_quantity_q, p.best_policy.reorder_point_s, ""]
        )
    _write_csv(out / "sensitivity.csv", header, rows)
    _emit(args.format, header, rows)
    if all(p.error is not None for p in points):
        return 2
    return 0


def cmd_fit_launch_data(rc: RunConfig, args, out: Path) -> int:
    path = args.dates if args.dates is not None else bundled_launch_dates_path()
    dates = read_launch_dates(path)
    mean_gap = fit_launch_gaps(dates)
    header = ["n_dates", "n_gaps", "mean_gap_days"]
    rows = [[len(dates), len(dates) - 1, mean_gap]]
    _write_csv(out / "launch_fit.csv", header, rows)
    _emit(args.format, header, rows)
    return 0


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument(
        "--config",
        default=None,
        help="JSON config file (default: bundled case-study example)",
    )
    shared.add_argument("--seed", type=int, default=None, help="master seed override")
    shared.add_argument("--jobs", type=int, default=None, help="worker threads")
    shared.add_argument("--out", default="out", help="directory for CSV outputs")
    shared.add_argument("--format", choices=("text", "csv"), default="text")

    parser = argparse.ArgumentParser(
        prog="sparechain",
        description="Spare-satellite supply chain evaluation and optimization",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evaluate", parents=[shared], help="analytic metrics and cost")
    p.add_argument("--inplane-only", action="store_true", help="single-echelon policy")

    p = sub.add_parser("simulate", parents=[shared], help="Monte Carlo replications")
    p.add_argument("--event-log", action="store_true", help="also write events.csv")

    p = sub.add_parser("validate", parents=[shared], help="model-vs-simulation errors")
    p.add_argument("--n-cases", type=int, default=None)
    p.add_argument("--reps", type=int, default=None)
    p.add_argument("--horizon", type=float, default=None, help="years per replication")
    p.add_argument("--warmup", type=float, default=None, help="discarded years")

    p = sub.add_parser("optimize", parents=[shared], help="search for cheapest strategy")
    p.add_argument("--inplane-only", action="store_true", help="exhaustive (s,Q) baseline")

    p = sub.add_parser("sensitivity", parents=[shared], help="savings vs failure rate")
    p.add_argument("--rates", default="0.001,0.005,0.01,0.05,0.1", help="comma separated")

    p = sub.add_parser("fit-launch-data", parents=[shared], help="mean launch gap")
    p.add_argument(
        "--dates",
        default=None,
        help="file with one ISO date per line (default: bundled launch history)",
    )

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config_path = args.config if args.config is not None else bundled_case_study_path()
        rc = load_run_config(config_path)
        master = args.seed if args.seed is not None else rc.seed
        if master < 0:
            raise ConfigError("--seed: must be nonnegative")
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        if args.command == "evaluate":
            return cmd_evaluate(rc, args, out)
        if args.command == "simulate":
            return cmd_simulate(rc, args, out, master)
        if args.command == "validate":
            return cmd_validate(rc, args, out, master)
        if args.command == "optimize":
            return cmd_optimize(rc, args, out, master)
        if args.command == "sensitivity":
            return cmd_sensitivity(rc, args, out, master)
        if args.command == "fit-launch-data":
            return cmd_fit_launch_data(rc, args, out)
        raise AssertionError(f"unhandled command {args.command}")
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
