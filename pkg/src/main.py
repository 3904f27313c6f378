#!/usr/bin/env python3
"""
Main entry point for ergolab.

Usage:
    python -m src.main tame --matrix shear.json
    python -m src.main flatness --system rotation:alpha=golden --observable cos1 --shifts 0:3 --grid 8
    python -m src.main average --system interval:square --method cesaro --point 0.5 --n 1000
    python -m src.main decompose --system interval:square --method cesaro --grid 100 --n 2000 --eps 0.05 --checkpoints 250,500,1000,2000
    python -m src.main validate-method --method cesaro --max-n 100
    python -m src.main scenarios --all --csv summary.csv
    python -m src.main obstruction --system interval:tent --grid 7
"""

import argparse
import json
import logging
import os
import sys
from typing import Any, Callable, Optional, Sequence

import yaml

from src.averaging import describe_point, detect_convergence, geometric_checkpoints, trace
from src.averaging.convergence import MIN_CHECKPOINTS
from src.decomposition import bi_invariance_check, decompose, load_grid
from src.scenarios import run_scenarios, summary_frame
from src.summation import parse_method_spec, validate_method
from src.systems import SystemSpec, load_piecewise_observables, load_rows, parse_point, parse_system_spec
from src.tameness import cylinder_grid, decide_tame, flatness_lp, periodic_point_obstruction
from src.utils.config import config
from src.utils.errors import ErgolabError, UsageError
from src.utils.result_store import ResultStore, parse_number

logger = logging.getLogger("ergolab")

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

REQUIRED = {
    "tame": ["matrix"],
    "flatness": ["system", "observable", "shifts", "grid"],
    "average": ["system", "method", "n"],
    "decompose": ["system", "method", "n"],
    "validate-method": ["method", "max_n"],
    "scenarios": [],
    "obstruction": ["system"],
}


def configure_logging(verbose: bool) -> None:
    """Log to stderr (stdout carries JSON), plus ERGOLAB_LOG_FILE when set."""
    handlers: list[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    log_file = os.getenv("ERGOLAB_LOG_FILE")
    if log_file:
        handlers.append(logging.FileHandler(log_file))
    logging.basicConfig(level=logging.INFO, format=LOG_FORMAT, handlers=handlers)
    logging.getLogger().setLevel(logging.DEBUG if verbose else logging.INFO)


def build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    """Top-level parser and the subparser of each subcommand."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=None, help="JSON/YAML file with flag values (flags win)")
    common.add_argument("--out", default=None, help="Output JSON path (default: stdout)")
    common.add_argument("--seed", type=int, default=0, help="Seed for randomized property checks")
    common.add_argument("-v", "--verbose", action="store_true", help="Enable verbose (debug) logging")

    parser = argparse.ArgumentParser(
        prog="ergolab",
        description="Weighted ergodic averages, ergodic decomposition and tameness checks",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
    # Decide tameness of the torus shear
    ergolab tame --matrix '[[1,1],[0,1]]'

    # Decompose t -> t^2 over a 101-point grid
    ergolab decompose --system interval:square --method cesaro --grid 100 --n 2000 \\
        --checkpoints 250,500,1000,2000

    # Run every acceptance scenario
    ergolab scenarios --all --csv summary.csv
        """
    )
    sub = parser.add_subparsers(dest="command", required=True)
    subparsers: dict[str, argparse.ArgumentParser] = {}

    p = sub.add_parser("tame", parents=[common], help="Decide tameness of an affine torus map")
    p.add_argument("--matrix", help="Matrix file {\"rows\": ...} or inline JSON rows")
    p.add_argument("--shift", default=None, help="Translation b as comma-separated numbers (recorded only)")
    p.add_argument("--allow-large", action="store_true", help=f"Accept d > {config.tameness.max_dimension}")
    subparsers["tame"] = p

    p = sub.add_parser("flatness", parents=[common], help="l1-flatness LP for one observable")
    p.add_argument("--system", help="System spec, e.g. rotation:alpha=golden")
    p.add_argument("--observable", help="Dictionary observable name")
    p.add_argument("--shifts", help="Comma list 0,1,2 or range a:b")
    p.add_argument("--grid", help="Resolution G, grid file, or cylinders:K for the shift")
    p.add_argument("--observables", default=None, help="Extra piecewise-linear observables file")
    p.add_argument("--allow-float", action="store_true", help="Read grid points as floats on expanding maps")
    subparsers["flatness"] = p

    p = sub.add_parser("average", parents=[common], help="Trace weighted averages from one point")
    p.add_argument("--system", help="System spec")
    p.add_argument("--method", help="Summation method spec")
    p.add_argument("--point", default=None, help="Starting point (comma-separated coordinates)")
    p.add_argument("--n", type=int, help="Final checkpoint")
    p.add_argument("--checkpoints", default=None, help="geometric:<r> or comma-separated checkpoints ending at n")
    p.add_argument("--observable", default=None, help="Trace only this dictionary observable")
    p.add_argument("--tol", type=float, default=None, help="Convergence tolerance")
    p.add_argument("--sep", type=float, default=None, help="Oscillation threshold")
    p.add_argument("--observables", default=None, help="Extra piecewise-linear observables file")
    p.add_argument("--allow-float", action="store_true", help="Float iteration on expanding maps")
    subparsers["average"] = p

    p = sub.add_parser("decompose", parents=[common], help="Psi map, components and separation")
    p.add_argument("--system", help="System spec")
    p.add_argument("--method", help="Summation method spec")
    p.add_argument("--grid", default=None, help=f"Resolution G or grid file (default: {config.decomposition.grid_resolution})")
    p.add_argument("--n", type=int, help="Final checkpoint")
    p.add_argument("--checkpoints", default=None, help="geometric:<r> or comma-separated checkpoints ending at n")
    p.add_argument("--eps", type=float, default=None, help="Clustering threshold")
    p.add_argument("--tol", type=float, default=None, help="Convergence tolerance")
    p.add_argument("--sep", type=float, default=None, help="Oscillation threshold")
    p.add_argument("--observables", default=None, help="Extra piecewise-linear observables file")
    p.add_argument("--bi-invariance", action="store_true", help="Also check that phi(omega) stays in omega's component")
    p.add_argument("--allow-float", action="store_true", help="Float grid points on expanding maps")
    subparsers["decompose"] = p

    p = sub.add_parser("validate-method", parents=[common], help="Check summation-matrix conditions")
    p.add_argument("--method", help="Summation method spec")
    p.add_argument("--max-n", type=int, help="Last row checked")
    p.add_argument("--threshold", type=float, default=0.05, help="Bound for v(max_n)")
    subparsers["validate-method"] = p

    p = sub.add_parser("scenarios", parents=[common], help="Run the acceptance scenarios")
    p.add_argument("--all", action="store_true", help="Run every scenario")
    p.add_argument("--only", default=None, help="Comma-separated scenario ids")
    p.add_argument("--csv", default=None, help="Summary table CSV path")
    p.add_argument("--timings", action="store_true", help="Include wall-times in the output")
    subparsers["scenarios"] = p

    p = sub.add_parser("obstruction", parents=[common], help="Periodic-point obstruction for interval maps")
    p.add_argument("--system", help="Interval system spec, e.g. interval:tent")
    p.add_argument("--grid", default=None, help="Resolution G or grid file of exact points")
    p.add_argument("--n", type=int, default=256, help="Iterations per point")
    subparsers["obstruction"] = p

    return parser, subparsers


def load_config_file(path: str, sub: argparse.ArgumentParser) -> dict[str, Any]:
    """
    Read flag values from a JSON/YAML mapping.

    Raises:
        UsageError: if the file is unreadable or holds keys the subcommand lacks.
    """
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = yaml.safe_load(fh)
    except FileNotFoundError as e:
        raise UsageError(f"--config: file not found: {path}") from e
    except yaml.YAMLError as e:
        raise UsageError(f"--config: cannot parse {path}: {e}") from e

    if data is None:
        return {}
    if not isinstance(data, dict):
        raise UsageError(f"--config: {path} must hold a mapping of flag names")

    known = {action.dest for action in sub._actions} - {"help", "config"}
    values = {}
    for key, value in data.items():
        dest = str(key).replace("-", "_")
        if dest not in known:
            raise UsageError(f"--config: unknown key {key!r}")
        values[dest] = value
    return values


def check_required(args: argparse.Namespace) -> None:
    for dest in REQUIRED[args.command]:
        if getattr(args, dest, None) is None:
            raise UsageError(f"--{dest.replace('_', '-')} is required for {args.command}")


def parse_int_list(text: str, flag: str) -> list[int]:
    """Comma list "0,1,2" or half-open range "a:b"."""
    try:
        if ":" in text:
            start, stop = text.split(":", 1)
            return list(range(int(start), int(stop)))
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as e:
        raise UsageError(f"{flag}: cannot parse {text!r}: {e}") from e


def load_system(args: argparse.Namespace, store: ResultStore) -> tuple[SystemSpec, Optional[Any]]:
    s, default_point = parse_system_spec(args.system, store)
    if getattr(args, "observables", None):
        s = s.with_observables(load_piecewise_observables(args.observables, store))
    return s, default_point


def resolve_checkpoints(args: argparse.Namespace) -> list[int]:
    """geometric:<r>, an explicit list ending at --n, or geometric with the configured ratio."""
    if args.checkpoints and args.checkpoints.startswith("geometric:"):
        try:
            ratio = float(args.checkpoints.split(":", 1)[1])
        except ValueError as e:
            raise UsageError(f"--checkpoints: bad ratio in {args.checkpoints!r}") from e
        return geometric_checkpoints(args.n, ratio)
    if args.checkpoints:
        checkpoints = parse_int_list(args.checkpoints, "--checkpoints")
        if not checkpoints or checkpoints[-1] != args.n:
            raise UsageError(f"--checkpoints must end at --n {args.n}")
        return checkpoints
    return geometric_checkpoints(args.n)


def cmd_tame(args: argparse.Namespace, store: ResultStore) -> int:
    rows = load_rows(args.matrix, store)
    if len(rows) > config.tameness.max_dimension and not args.allow_large:
        raise UsageError(f"--matrix: d = {len(rows)} > {config.tameness.max_dimension} needs --allow-large")
    b = [parse_number(v) for v in args.shift.split(",")] if args.shift else None
    certificate = decide_tame(rows, b)
    store.write_json(certificate.to_dict(), args.out)
    return 0


def cmd_flatness(args: argparse.Namespace, store: ResultStore) -> int:
    s, _ = load_system(args, store)
    x = s.observable(args.observable)
    shifts = parse_int_list(args.shifts, "--shifts")
    if args.grid.startswith("cylinders:"):
        if s.kind != "shift":
            raise UsageError("--grid cylinders:K applies to the shift only")
        depth = args.grid.split(":", 1)[1]
        if not depth.isdigit() or int(depth) < 1:
            raise UsageError(f"--grid cylinders:K needs a positive integer K, got {depth!r}")
        grid = cylinder_grid(int(depth))
    else:
        grid = load_grid(s, args.grid, store, allow_float=args.allow_float)
    result = flatness_lp(s, x, shifts, grid)
    store.write_json(result.to_dict(), args.out)
    return 0


def cmd_average(args: argparse.Namespace, store: ResultStore) -> int:
    s, point = load_system(args, store)
    if args.point is not None:
        point = parse_point(s, args.point, allow_float=args.allow_float)
    if point is None:
        raise UsageError(f"--point is required for {s.name}")
    m = parse_method_spec(args.method, store)
    checkpoints = resolve_checkpoints(args)

    observables = [s.observable(args.observable)] if args.observable else None
    t = trace(s, m, point, checkpoints, observables=observables)
    verdict = None
    if len(checkpoints) >= MIN_CHECKPOINTS:
        verdict = detect_convergence(t, tol=args.tol, sep=args.sep).to_dict()
    else:
        logger.info(f"Fewer than {MIN_CHECKPOINTS} checkpoints; no convergence verdict")

    store.write_json({**t.to_dict(), "point": describe_point(point), "verdict": verdict}, args.out)
    return 0


def cmd_decompose(args: argparse.Namespace, store: ResultStore) -> int:
    s, _ = load_system(args, store)
    m = parse_method_spec(args.method, store)
    grid_spec = args.grid or str(config.decomposition.grid_resolution)
    grid = load_grid(s, grid_spec, store, allow_float=args.allow_float)
    checkpoints = resolve_checkpoints(args)

    report = decompose(s, m, grid, args.n, eps=args.eps, tol=args.tol, sep=args.sep, checkpoints=checkpoints)
    payload = report.to_dict()
    if args.bi_invariance:
        payload["bi_invariance"] = bi_invariance_check(s, m, report, tol=args.tol, sep=args.sep, checkpoints=checkpoints)
    store.write_json(payload, args.out)
    return 0


def cmd_validate_method(args: argparse.Namespace, store: ResultStore) -> int:
    m = parse_method_spec(args.method, store)
    report = validate_method(m, args.max_n, args.threshold)
    store.write_json(report.to_dict(), args.out)
    return 0


def cmd_scenarios(args: argparse.Namespace, store: ResultStore) -> int:
    if args.all:
        selection = "all"
    elif args.only:
        selection = args.only
    else:
        raise UsageError("scenarios needs --all or --only <ids>")

    results = run_scenarios(selection, seed=args.seed, max_workers=config.max_workers)
    passed = all(r.passed for r in results)
    store.write_json({"scenarios": [r.to_dict(args.timings) for r in results], "pass": passed}, args.out)
    if args.csv:
        store.write_csv(summary_frame(results, args.timings), args.csv)

    logger.info(f"{sum(r.passed for r in results)}/{len(results)} scenarios passed")
    return 0 if passed else 1


def cmd_obstruction(args: argparse.Namespace, store: ResultStore) -> int:
    s, _ = parse_system_spec(args.system, store)
    grid = load_grid(s, args.grid or str(config.decomposition.grid_resolution), store)
    report = periodic_point_obstruction(s, grid, args.n)
    store.write_json(report.to_dict(), args.out)
    return 0


COMMANDS: dict[str, Callable[[argparse.Namespace, ResultStore], int]] = {
    "tame": cmd_tame,
    "flatness": cmd_flatness,
    "average": cmd_average,
    "decompose": cmd_decompose,
    "validate-method": cmd_validate_method,
    "scenarios": cmd_scenarios,
    "obstruction": cmd_obstruction,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    """
    Parse argv and execute the subcommand.

    Returns:
        0 on success, 1 on a domain error (or a failed scenario), 2 on a usage error.
    """
    parser, subparsers = build_parser()
    try:
        args = parser.parse_args(argv)
        configure_logging(args.verbose)
        if args.config:
            sub = subparsers[args.command]
            sub.set_defaults(**load_config_file(args.config, sub))
            args = parser.parse_args(argv)
        check_required(args)

        logger.debug(f"Running {args.command} with {vars(args)}")
        return COMMANDS[args.command](args, ResultStore())

    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2
    except UsageError as e:
        logger.error(f"Usage error: {e}")
        return 2
    except ErgolabError as e:
        logger.error(json.dumps({"error": type(e).__name__, "message": str(e)}))
        return 1
    except Exception as e:
        logger.exception(f"Unexpected error: {e}")
        return 1


def main() -> int:
    """Main entry point."""
    return run(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
