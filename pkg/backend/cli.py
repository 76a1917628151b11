#!/usr/bin/env python
"""
Command-line front end for the geometric discord toolkit.

Usage:
  python cli.py compute --J 1 --D 0 --B 0 --T 1 --measure all
  python cli.py sweep --vary D --from 0 --to 6 --steps 601 --J 1 --T 0.5 \\
      --family-param B --family-values 0,0.5,1,1.5,2,3 --out data/sweeps/dm.csv
  python cli.py sweep --preset temperature --measure trace --detect
  python cli.py verify --suite oracle --samples 20
  python cli.py limits --case dinf --D 50

Temperatures are in units of k_B; T = 0 evaluates the ground state.
Exit status: 0 on success, 1 on a failed verification or computation
error, 2 on bad flags.
"""

import argparse
import json
import logging
import sys
from typing import List, Optional

from pydantic import ValidationError

from config import Settings, get_settings, settings_from_env
from errors import GQDError
from measure_service import measure_all
from models.params import ModelParams
from models.results import Measure, Method
from models.sweep import SweepSpec
from sweep_service import PRESETS, detect_for_sweep, preset_spec, run_sweep, write_table
from utils.logging_utils import setup_logging
from verification import SUITES, evaluate_limit, print_report, run_suites

logger = logging.getLogger(__name__)

MODEL_FLAGS = ("J", "B", "D", "T")

METHOD_NAMES = {
    "closed": Method.CLOSED_FORM,
    "closed_form": Method.CLOSED_FORM,
    "definitional": Method.DEFINITIONAL,
    "oracle": Method.ORACLE,
}


def _measures(choice: str) -> List[Measure]:
    return list(Measure) if choice == "all" else [Measure(choice)]


def _float_list(text: str) -> List[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got '{text}'")


def _add_model_flags(parser: argparse.ArgumentParser, defaults: ModelParams, store_defaults: bool = True) -> None:
    for name in MODEL_FLAGS:
        parser.add_argument(f"--{name}", type=float, default=getattr(defaults, name) if store_defaults else None,
                            help=f"{name} (default: {getattr(defaults, name)})")


def _add_method_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--measure", choices=["trace", "hellinger", "bures", "all"], default="all")
    parser.add_argument("--method", choices=sorted(METHOD_NAMES), default=None,
                        help="computation path (default: closed form for trace/Hellinger, definitional for Bures)")
    parser.add_argument("--seed", type=int, default=None, help="seed for the oracle start points")
    parser.add_argument("--paper-verbatim", action="store_true",
                        help="use the uncorrected printed Hellinger constants (closed form) or square root of "
                             "the Gibbs state (definitional); output is tagged and not clamped")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gqd",
        description="Geometric quantum discords of the thermal two-qubit XX chain with DM interaction",
    )
    parser.add_argument("--log-level", default=None, help="logging level (default from settings)")
    parser.add_argument("--log-dir", default=None, help="also write logs to this directory")
    commands = parser.add_subparsers(dest="command", required=True)

    compute = commands.add_parser("compute", help="evaluate the discords at one parameter point")
    _add_model_flags(compute, ModelParams())
    _add_method_flags(compute)
    compute.add_argument("--format", choices=["text", "json"], default="text")

    sweep = commands.add_parser(
        "sweep",
        help="parameter sweep written as CSV or JSON",
        description="Sweep one parameter; T = 0 grid points use the ground state.",
    )
    sweep.add_argument("--preset", choices=sorted(PRESETS), default=None)
    sweep.add_argument("--vary", choices=["D", "B", "T"], default=None)
    sweep.add_argument("--from", dest="start", type=float, default=None)
    sweep.add_argument("--to", dest="stop", type=float, default=None)
    sweep.add_argument("--steps", type=int, default=None)
    _add_model_flags(sweep, ModelParams(), store_defaults=False)
    sweep.add_argument("--family-param", choices=["J", "B", "D", "T"], default=None)
    sweep.add_argument("--family-values", type=_float_list, default=None)
    _add_method_flags(sweep)
    sweep.add_argument("--out", default=None, help="output file (default: standard output)")
    sweep.add_argument("--format", choices=["csv", "json"], default="csv")
    sweep.add_argument("--detect", action="store_true", help="report sudden-change points after the table")
    sweep.add_argument("--workers", type=int, default=None)
    sweep.add_argument("--progress", action="store_true")

    verify = commands.add_parser("verify", help="run the verification suites")
    verify.add_argument("--suite", choices=list(SUITES) + ["all"], default="all")
    verify.add_argument("--samples", type=int, default=20)
    verify.add_argument("--seed", type=int, default=0)

    limits = commands.add_parser("limits", help="evaluate the analytic limiting cases")
    limits.add_argument("--case", choices=["zero", "dinf"], required=True)
    _add_model_flags(limits, ModelParams(J=1.0, B=0.0, D=50.0, T=0.5))

    return parser


def _settings(args: argparse.Namespace) -> Settings:
    overrides = {}
    if getattr(args, "seed", None) is not None and args.command != "verify":
        overrides["oracle_seed"] = args.seed
    if getattr(args, "workers", None):
        overrides["sweep_workers"] = args.workers
    if getattr(args, "progress", False):
        overrides["sweep_progress"] = True
    if args.log_level:
        overrides["log_level"] = args.log_level
    if args.log_dir:
        overrides["log_dir"] = args.log_dir
    return settings_from_env(**overrides) if overrides else get_settings()


def _params(args: argparse.Namespace) -> ModelParams:
    return ModelParams(**{name: getattr(args, name) for name in MODEL_FLAGS if getattr(args, name) is not None})


def run_compute(args: argparse.Namespace, settings: Settings) -> int:
    method = METHOD_NAMES[args.method] if args.method else None
    results = measure_all(_params(args), _measures(args.measure), method, args.paper_verbatim, settings)
    if args.format == "json":
        print(json.dumps({m.value: r.to_dict() for m, r in results.items()}, indent=2, default=str))
    else:
        for measure, result in results.items():
            branch = f" [{result.branch}]" if result.branch else ""
            print(f"{measure.value:<10} {result.value:.12g}  ({result.method_label}){branch}")
    return 0


def _sweep_spec(args: argparse.Namespace) -> SweepSpec:
    common = dict(
        measures=_measures(args.measure),
        method=METHOD_NAMES[args.method] if args.method else None,
        output=args.out,
        format=args.format,
        paper_verbatim=args.paper_verbatim,
    )
    if args.preset:
        given = {
            "--vary": args.vary, "--from": args.start, "--to": args.stop, "--family-param": args.family_param,
            "--family-values": args.family_values, **{f"--{name}": getattr(args, name) for name in MODEL_FLAGS},
        }
        clashing = [flag for flag, value in given.items() if value is not None]
        if clashing:
            raise argparse.ArgumentTypeError(
                f"--preset {args.preset} fixes the sweep grid and model; drop {', '.join(clashing)}"
            )
        return preset_spec(args.preset, steps=args.steps, **common)
    if args.vary is None or args.start is None or args.stop is None or args.steps is None:
        raise argparse.ArgumentTypeError("sweep needs --preset or all of --vary, --from, --to and --steps")
    return SweepSpec(
        vary=args.vary,
        start=args.start,
        stop=args.stop,
        steps=args.steps,
        fixed=_params(args),
        family_param=args.family_param,
        family_values=args.family_values or [],
        **common,
    )


def run_sweep_command(args: argparse.Namespace, settings: Settings) -> int:
    spec = _sweep_spec(args)
    rows = run_sweep(spec, settings)
    text = write_table(rows, spec.output, spec.format, settings)
    if not spec.output:
        sys.stdout.write(text)
    if args.detect:
        for point in detect_for_sweep(spec, rows, settings):
            print(f"# {point.series}: {point.kind} at {spec.vary} = {point.location:.6f}", file=sys.stderr)
    return 0


def run_verify(args: argparse.Namespace, settings: Settings) -> int:
    results = run_suites(args.suite, samples=args.samples, seed=args.seed, settings=settings)
    passed = print_report(results)
    if not passed:
        logger.error("Verification failed")
    return 0 if passed else 1


def run_limits(args: argparse.Namespace, settings: Settings) -> int:
    values = evaluate_limit(args.case, _params(args), settings)
    for measure, value in values.items():
        print(f"{measure.value:<10} {value:.12g}")
    return 0


COMMANDS = {
    "compute": run_compute,
    "sweep": run_sweep_command,
    "verify": run_verify,
    "limits": run_limits,
}


def cli_main(argv: Optional[List[str]] = None) -> int:
    """Parse ``argv`` and run one subcommand; returns the exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    try:
        settings = _settings(args)
        setup_logging(settings.log_level, settings.log_dir)
        return COMMANDS[args.command](args, settings)
    except (argparse.ArgumentTypeError, ValidationError) as e:
        logger.error(f"Invalid arguments: {e}")
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (GQDError, OSError) as e:
        logger.error(f"{args.command} failed: {e}")
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(cli_main())
