"""Command-line front end.

Exit codes: 0 = ran, all bound checks Consistent; 10 = at least one Violated
verdict; 1 = usage or config error; 2 = capacity error.
"""

import argparse
import json
import sys

from .errors import CapacityError, ConfigError, DomainError, ValidationError
from .experiment import (
    ExperimentConfig,
    emit_plot_data,
    emit_report,
    parse_config,
    report_from_dict,
    run_experiment,
)
from .montecarlo import VIOLATED

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CAPACITY = 2
EXIT_VIOLATED = 10

RUN_COMMANDS = ("tail", "quantiles", "falsify", "asymptotic-mean")


def _add_run_flags(sub):
    sub.add_argument("--config", help="config file; overrides the direct flags")
    sub.add_argument("--seed", type=int, help="master seed (mandatory, never auto-generated)")
    sub.add_argument("--S", help="dimension, or comma list for asymptotic-mean sweeps")
    sub.add_argument("--n", type=int, help="sample size for finite-n families")
    sub.add_argument("--delta", help="failure probability, or comma list")
    sub.add_argument("--threshold", help="deviation threshold(s) for tail tasks")
    sub.add_argument("--grid", help="CDF grid: 'lo:hi:count' or comma list")
    sub.add_argument("--trials", type=int, help="Monte Carlo trials (default 10000)")
    sub.add_argument("--D", type=float, help="box scale (default 1)")
    sub.add_argument("--family", choices=["multinomial", "dirichlet", "limit"],
                     help="distribution family")
    sub.add_argument("--bound",
                     choices=["weissman-union", "weissman-exact", "devroye", "agrawal"],
                     help="bound family for falsify tasks")
    sub.add_argument("--workers", type=int, help="parallel workers (default 1 or env)")
    sub.add_argument("--format", choices=["csv", "json"], default="json")
    sub.add_argument("--out", help="report output path (default stdout)")
    sub.add_argument("--plot-out", help="also write plot data for the task here")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="l1conc",
        description="Monte Carlo verification of l1 concentration bounds",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in RUN_COMMANDS:
        _add_run_flags(sub.add_parser(name, help=f"run a {name} experiment"))
    rep = sub.add_parser("report", help="re-emit a saved JSON report")
    rep.add_argument("--in", dest="input", required=True, help="saved JSON report")
    rep.add_argument("--format", choices=["csv", "json"], default="json")
    rep.add_argument("--out", help="output path (default stdout)")
    rep.add_argument("--plot-task", help="emit plot data for this task id instead")
    return parser


def _config_from_flags(args) -> ExperimentConfig:
    if args.seed is None:
        raise ConfigError("--seed is required (seeds are never auto-generated)")
    raw = {"kind": (0, args.command)}
    for key, value in (
        ("family", args.family),
        ("bound", args.bound),
        ("S", args.S),
        ("delta", args.delta),
        ("threshold", args.threshold),
        ("grid", args.grid),
    ):
        if value is not None:
            raw[key] = (0, str(value))
    for key, value in (("n", args.n), ("trials", args.trials), ("D", args.D)):
        if value is not None:
            raw[key] = (0, str(value))
    # reuse the config validator so flags and files share one rule set
    from .experiment import _build_task

    errors: list[str] = []
    task = _build_task(0, raw, errors)
    if errors:
        raise ConfigError("; ".join(errors))
    return ExperimentConfig(master_seed=args.seed, tasks=[task], workers=args.workers)


def _write(data: bytes, path: str | None):
    if path is None:
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
    else:
        with open(path, "wb") as fh:
            fh.write(data)


def _run(args) -> int:
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            config = parse_config(fh.read())
        if args.workers is not None:
            config.workers = args.workers
        if args.seed is not None:
            config.master_seed = args.seed
    else:
        config = _config_from_flags(args)
    report = run_experiment(config)
    _write(emit_report(report, args.format), args.out)
    if args.plot_out:
        _write(emit_plot_data(report, config.tasks[0].task_id), args.plot_out)
    violated = any(row.get("outcome") == VIOLATED for row in report.rows)
    return EXIT_VIOLATED if violated else EXIT_OK


def _reemit(args) -> int:
    with open(args.input, "r", encoding="utf-8") as fh:
        report = report_from_dict(json.load(fh))
    if args.plot_task:
        _write(emit_plot_data(report, args.plot_task), args.out)
    else:
        _write(emit_report(report, args.format), args.out)
    violated = any(row.get("outcome") == VIOLATED for row in report.rows)
    return EXIT_VIOLATED if violated else EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "report":
            return _reemit(args)
        return _run(args)
    except CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (ConfigError, ValidationError, DomainError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
