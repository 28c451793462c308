"""
Command-line interface: ``fracdf <command> ...``.

Exit codes: 0 success (``test``: null not rejected), 10 null rejected,
2 unreadable or empty input, 3 non-numeric data, 4 degenerate regression,
5 invalid arguments or configuration, 6 critical-value table does not cover
the request. Data go to stdout, diagnostics to stderr.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import _rng
from .fdftest import (
    DEFAULT_ALPHA_GRID,
    DEFAULT_N_GRID,
    TableCoverageError,
    calibrate_critical_values,
    fdf_test,
    load_table,
    write_tables,
)
from .fracdiff import frac_diff, generate_fi
from .io import EmptyInputError, SeriesFormatError, read_series, write_series
from .montecarlo import (
    ConfigError,
    kernel_density,
    load_mc_config,
    run_phi_sweep,
    run_size_power,
    write_density_csv,
    write_report_csv,
    write_report_json,
)
from .regress import DegenerateRegressionError

EXIT_OK = 0
EXIT_REJECT = 10
EXIT_UNREADABLE = 2
EXIT_NON_NUMERIC = 3
EXIT_DEGENERATE = 4
EXIT_USAGE = 5
EXIT_COVERAGE = 6


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _emit(text: str, output: str | None) -> None:
    if output in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(output, "w") as fh:
            fh.write(text)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fracdf", description="Fractional Dickey-Fuller test toolkit.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("test", help="test H0: d >= d0 on a series")
    p.add_argument("input", nargs="?", default="-", help="one value per line; '-' for stdin")
    p.add_argument("--d0", type=float, default=1.0)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--stat", choices=["z1", "z2"], default="z2", type=str.lower)
    p.add_argument("--lags", type=int, default=0)
    p.add_argument("--table", help="critical-value CSV (default: $FRACDF_TABLE or bundled)")
    p.add_argument("--format", choices=["csv", "json"], default="csv")

    p = sub.add_parser("simulate", help="generate an FI(d) series")
    p.add_argument("--d", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--output", "-o")

    p = sub.add_parser("fracdiff", help="apply (1-L)^d to a series")
    p.add_argument("input", nargs="?", default="-")
    p.add_argument("--d", type=float, required=True)
    p.add_argument("--output", "-o")

    p = sub.add_parser("calibrate", help="simulate a critical-value table")
    p.add_argument("--stat", choices=["z1", "z2", "both"], default="both", type=str.lower)
    p.add_argument("--n-grid", type=_int_list, default=list(DEFAULT_N_GRID))
    p.add_argument("--alpha-grid", type=_float_list, default=list(DEFAULT_ALPHA_GRID))
    p.add_argument("--reps", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--output", "-o")

    p = sub.add_parser("mc", help="run a size/power experiment file")
    p.add_argument("--config", required=True, help="YAML/JSON file or bundled name (tables_1_4)")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--samples", action="store_true", help="include raw statistics in JSON output")
    p.add_argument("--table", help="critical-value CSV")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--output", "-o")

    p = sub.add_parser("density", help="kernel density of a sample")
    p.add_argument("--input", default="-")
    p.add_argument("--grid", type=int, default=512)
    p.add_argument("--output", "-o")

    p = sub.add_parser("sweep", help="phi-hat against the integration order")
    p.add_argument("--d0", type=float, required=True)
    p.add_argument("--d-min", type=float, default=0.0)
    p.add_argument("--d-max", type=float, default=2.5)
    p.add_argument("--step", type=float, default=0.01)
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--order-shift", type=float, default=0.0)
    p.add_argument("--output", "-o")
    return parser


def _validate(args) -> None:
    cmd = args.command
    if cmd == "test":
        if not 0.0 < args.alpha < 0.5:
            raise _UsageError("--alpha must lie in (0, 0.5)")
        if args.lags < 0:
            raise _UsageError("--lags must be nonnegative")
    if cmd == "simulate":
        if args.n < 1:
            raise _UsageError("--n must be at least 1")
        if not args.sigma > 0:
            raise _UsageError("--sigma must be positive")
    if cmd in ("simulate", "calibrate", "sweep") and args.seed < 0:
        raise _UsageError("--seed must be nonnegative")
    if cmd == "calibrate":
        if not args.n_grid or not args.alpha_grid:
            raise _UsageError("grids must be nonempty")
        if any(not 0 < a < 0.5 for a in args.alpha_grid):
            raise _UsageError("alpha values must lie in (0, 0.5)")
        if any(n < 3 for n in args.n_grid):
            raise _UsageError("sample sizes must be at least 3")
        if args.reps * min(args.alpha_grid) < 100:
            raise _UsageError("need reps * alpha >= 100 for the smallest alpha")
    if cmd == "density" and args.grid < 2:
        raise _UsageError("--grid must be at least 2")
    if cmd == "sweep":
        if not args.step > 0 or args.d_max < args.d_min:
            raise _UsageError("need --step > 0 and --d-max >= --d-min")
        if args.n < 100:
            raise _UsageError("--n must be at least 100")


def _cmd_test(args) -> int:
    y = read_series(args.input)
    if len(y) < args.lags + 3:
        raise DegenerateRegressionError(
            f"{len(y)} observations are too few for {args.lags} lags")
    table = load_table(args.stat, args.table) if args.table else None
    outcome = fdf_test(y, d0=args.d0, alpha=args.alpha, statistic=args.stat,
                       table=table, p=args.lags)
    fit = outcome.fit
    record = {
        "statistic": outcome.statistic_used,
        "value": outcome.value,
        "critical_value": outcome.critical_value,
        "alpha": outcome.alpha,
        "d0": outcome.d0,
        "decision": "reject" if outcome.reject else "fail to reject",
        "rho_hat": fit.rho_hat,
        "phi_hat": fit.phi_hat,
        "s2": fit.s2,
        "n": fit.n,
        "lags": args.lags,
    }
    if args.format == "json":
        sys.stdout.write(json.dumps(record, indent=1) + "\n")
    else:
        sys.stdout.write("field,value\n")
        for k, v in record.items():
            sys.stdout.write(f"{k},{float(v)!r}\n" if isinstance(v, float) else f"{k},{v}\n")
    return EXIT_REJECT if outcome.reject else EXIT_OK


def _cmd_simulate(args) -> int:
    u = _rng.gaussian_innovations(args.n, args.seed, args.sigma)
    write_series(generate_fi(args.d, u), args.output)
    return EXIT_OK


def _cmd_fracdiff(args) -> int:
    write_series(frac_diff(read_series(args.input), args.d), args.output)
    return EXIT_OK


def _cmd_calibrate(args) -> int:
    stats = ["Z1", "Z2"] if args.stat == "both" else [args.stat.upper()]
    tables = [
        calibrate_critical_values(s, args.n_grid, args.alpha_grid, args.reps,
                                  args.seed, workers=args.workers)
        for s in stats
    ]
    _emit(write_tables(tables), args.output)
    return EXIT_OK


def _cmd_mc(args) -> int:
    configs = load_mc_config(args.config)
    reports = []
    for cfg in configs:
        table = load_table(cfg.statistic, args.table) if args.table else None
        reports.append(run_size_power(cfg, table, keep_samples=args.samples,
                                      workers=args.workers))
        print(f"done: d={cfg.d_true} n={cfg.n} ({reports[-1].wall_time:.1f}s)",
              file=sys.stderr)
    if args.format == "json":
        text = write_report_json(reports, include_samples=args.samples) + "\n"
    else:
        text = write_report_csv(reports)
    _emit(text, args.output)
    return EXIT_OK


def _cmd_density(args) -> int:
    grid = kernel_density(read_series(args.input), args.grid)
    _emit(write_density_csv(grid), args.output)
    return EXIT_OK


def _cmd_sweep(args) -> int:
    rows = run_phi_sweep(args.d_min, args.d_max, args.step, args.d0, args.n,
                         args.seed, order_shift=args.order_shift)
    text = "d,phi_hat\n" + "".join(f"{float(d)!r},{float(phi)!r}\n" for d, phi in rows)
    _emit(text, args.output)
    return EXIT_OK


_COMMANDS = {
    "test": _cmd_test,
    "simulate": _cmd_simulate,
    "fracdiff": _cmd_fracdiff,
    "calibrate": _cmd_calibrate,
    "mc": _cmd_mc,
    "density": _cmd_density,
    "sweep": _cmd_sweep,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _validate(args)
    except _UsageError as exc:
        print(f"fracdf: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return _COMMANDS[args.command](args)
    except EmptyInputError as exc:
        print(f"fracdf: empty input: {exc}", file=sys.stderr)
        return EXIT_UNREADABLE
    except SeriesFormatError as exc:
        print(f"fracdf: bad data: {exc}", file=sys.stderr)
        return EXIT_NON_NUMERIC
    except OSError as exc:
        print(f"fracdf: cannot read input: {exc}", file=sys.stderr)
        return EXIT_UNREADABLE
    except DegenerateRegressionError as exc:
        print(f"fracdf: degenerate regression: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except ConfigError as exc:
        print(f"fracdf: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TableCoverageError as exc:
        print(f"fracdf: {exc}", file=sys.stderr)
        return EXIT_COVERAGE
    except ValueError as exc:
        print(f"fracdf: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
