"""Command-line interface: simulate, loglik, fit, residuals.

Exit codes: 0 success, 1 usage error, 2 data or format error, 3 numerical
failure. Failures print one diagnostic line on stderr.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .errors import (
    MarkMismatch,
    ModelSpecError,
    NumericalError,
    PatternError,
    PointProcessError,
    ReplicateError,
)
from .fileio import EventFileError, dump_json, format_number, read_events, read_model, write_events
from .inference import FitConfig, fit_mle, free_parameter_names, log_likelihood
from .models import FAMILIES
from .residuals import residual_report
from .simulate import ALGORITHMS, SimConfig, simulate_batch

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 1, 2, 3


class CommandError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CommandError(EXIT_USAGE, f"{self.prog}: {message}")


def _positive_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not v > 0 or v == float("inf"):
        raise argparse.ArgumentTypeError(f"must be finite and > 0: {text!r}")
    return v


def _seed(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _count(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers: {text!r}") from None


def _fixed(text: str) -> tuple[str, list[float]]:
    name, sep, values = text.partition("=")
    if not sep or not name:
        raise argparse.ArgumentTypeError(f"expected NAME=VALUES: {text!r}")
    return name.strip(), _float_list(values)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pointproc", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("simulate", help="simulate replicates of a model")
    p.add_argument("--model", required=True, type=Path)
    p.add_argument("--t-end", required=True, type=_positive_float)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--algorithm", choices=ALGORITHMS, default="inverse")
    p.add_argument("--replicates", type=_count, default=1)
    p.add_argument("--out", required=True, help="path prefix; writes <prefix>_<k>.csv")
    p.add_argument("--max-events", type=_count, default=10_000_000)
    p.add_argument("--lookahead", type=_positive_float, default=1.0)

    p = sub.add_parser("loglik", help="log-likelihood of an event file")
    p.add_argument("--model", required=True, type=Path)
    p.add_argument("--events", required=True, type=Path)
    p.add_argument("--t-end", required=True, type=_positive_float)

    p = sub.add_parser("fit", help="maximum-likelihood fit")
    p.add_argument("--family", required=True, choices=sorted(FAMILIES))
    p.add_argument("--events", required=True, type=Path)
    p.add_argument("--t-end", required=True, type=_positive_float)
    p.add_argument("--init", required=True, type=_float_list, help="comma-separated initial values")
    p.add_argument("--max-iter", type=_count, default=2000)
    p.add_argument("--fixed", type=_fixed, action="append", default=[],
                   help="NAME=VALUES held fixed, e.g. breakpoints=1,2 or n_max=3")

    p = sub.add_parser("residuals", help="time-rescaling residual report")
    p.add_argument("--model", required=True, type=Path)
    p.add_argument("--events", required=True, type=Path)
    p.add_argument("--t-end", required=True, type=_positive_float)
    p.add_argument("--out", required=True, type=Path)
    return parser


def _load_model(path):
    try:
        return read_model(path)
    except ModelSpecError as exc:
        raise CommandError(EXIT_DATA, str(exc)) from None


def cmd_simulate(args) -> int:
    model = _load_model(args.model)
    config = SimConfig(args.t_end, args.algorithm, args.seed, args.replicates,
                       max_events=args.max_events, lookahead=args.lookahead)
    patterns = simulate_batch(model, config)
    for k, pattern in enumerate(patterns):
        write_events(f"{args.out}_{k}.csv", pattern)
    return EXIT_OK


def cmd_loglik(args) -> int:
    model = _load_model(args.model)
    pattern = read_events(args.events, args.t_end)
    print(format_number(log_likelihood(model, pattern)))
    return EXIT_OK


def cmd_fit(args) -> int:
    fixed = {}
    for name, values in args.fixed:
        fixed[name] = values if name in ("breakpoints", "rates") else values[0]
    pattern = read_events(args.events, args.t_end)
    try:
        names = free_parameter_names(args.family, fixed)
    except ModelSpecError as exc:
        raise CommandError(EXIT_USAGE, str(exc)) from None
    try:
        result = fit_mle(args.family, pattern, FitConfig(args.init, max_iterations=args.max_iter, fixed=fixed))
    except ModelSpecError as exc:
        raise CommandError(EXIT_USAGE, f"{exc} (free parameters: {', '.join(names)})") from None
    print(dump_json({
        "family": args.family,
        "params": result.params,
        "log_likelihood": result.log_likelihood,
        "converged": result.converged,
        "iterations": result.iterations,
        "termination_reason": result.termination_reason,
    }), end="")
    return EXIT_OK


def cmd_residuals(args) -> int:
    model = _load_model(args.model)
    pattern = read_events(args.events, args.t_end)
    report = residual_report(model, pattern)
    try:
        args.out.write_text(dump_json(report.to_dict()), encoding="utf-8")
    except OSError as exc:
        raise CommandError(EXIT_DATA, f"cannot write {args.out}: {exc.strerror}") from None
    if report.tests_defined:
        print(f"n={report.n} ks={format_number(report.ks_statistic)} p={format_number(report.ks_p_value)}")
    else:
        print(f"n=0 ks=nan p=nan")
    return EXIT_OK


COMMANDS = {
    "simulate": cmd_simulate,
    "loglik": cmd_loglik,
    "fit": cmd_fit,
    "residuals": cmd_residuals,
}


def _exit_code(exc: BaseException) -> int:
    if isinstance(exc, ReplicateError):
        return _exit_code(exc.error)
    if isinstance(exc, NumericalError):
        return EXIT_NUMERIC
    if isinstance(exc, (EventFileError, PatternError, MarkMismatch, ModelSpecError, OSError, PointProcessError)):
        return EXIT_DATA
    return EXIT_USAGE


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except CommandError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (PointProcessError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return _exit_code(exc)


if __name__ == "__main__":
    sys.exit(main())
