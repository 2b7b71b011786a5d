from __future__ import annotations

import argparse
import json
import logging
import sys
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from importlib import resources
from typing import List, Optional

from .config import DEFAULT_ASCENT_STEPS, DEFAULT_RESTARTS, DEFAULT_SEED, settings
from .core.derivations import DerivationSpec, norm_estimate
from .core.operators import diagonal, ideal_norm
from .core.search import SearchBudget
from .core.sequences import as_sequence
from .core.spaces import SpaceSpec, concavity_modulus, parse_space, registered_spaces, seq_norm
from .errors import ConfigError, IdealCalcError, InvalidArgumentError, NumericFailureError
from .experiments.runner import format_summary, load_config, parse_config, run, with_seed, write_report
from .matrix_io import read_matrix

logger = logging.getLogger("idealcalc")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2


def _setup_logging(verbosity: int) -> None:
    if verbosity >= 2:
        level = logging.DEBUG
    elif verbosity == 1:
        level = logging.INFO
    else:
        level = getattr(logging, settings.LOG_LEVEL, logging.WARNING)
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")


def _default_config():
    text = resources.files("idealcalc").joinpath("data/default.toml").read_text(encoding="utf-8")
    return parse_config(tomllib.loads(text))


def cmd_run(args: argparse.Namespace) -> int:
    config = load_config(args.config) if args.config else _default_config()
    if args.seed is not None:
        config = with_seed(config, args.seed)
    out = args.out or config.output.path
    fmt = args.format or config.output.format
    report = run(config, threads=args.threads)
    if out:
        write_report(report, out, fmt)
    print(format_summary(report))
    return EXIT_OK if report.success else EXIT_FAILED


def _parse_seq(text: str) -> List[float]:
    try:
        return [float(tok) for tok in text.replace(" ", "").split(",") if tok]
    except ValueError as exc:
        raise InvalidArgumentError(f"--seq must be a comma-separated list of reals: {exc}") from exc


def cmd_norms(args: argparse.Namespace) -> int:
    xi = as_sequence(_parse_seq(args.seq))
    if args.space:
        spaces = [parse_space(s) for s in args.space]
    else:
        spaces = list(registered_spaces(max(64, xi.size)))
    width = max(len(E.canonical()) for E in spaces)
    print(f"{'space':<{width}}  {'seq_norm':>14}  {'C':>8}  {'ideal_norm(diag)':>16}")
    for E in spaces:
        value = seq_norm(E, xi)
        op_value = ideal_norm(E, diagonal(xi)) if xi.size else 0.0
        print(f"{E.canonical():<{width}}  {value:>14.10g}  {concavity_modulus(E):>8.4g}  {op_value:>16.10g}")
    return EXIT_OK


def cmd_dnorm(args: argparse.Namespace) -> int:
    I: SpaceSpec = parse_space(args.space_i)
    J: SpaceSpec = parse_space(args.space_j)
    budget = SearchBudget.parse(args.budget, seed=args.seed)
    a = read_matrix(args.matrix)
    report = norm_estimate(DerivationSpec(a), I, J, budget)
    print(json.dumps(report.to_record(), indent=2))
    return EXIT_OK if report.passed else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="idealcalc",
        description="Ideal quasi-norms, multiplier and derivation norms at finite truncation",
    )
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="Run an experiment config and report every check")
    p_run.add_argument("--config", default=None, help="TOML experiment config (defaults to the bundled one)")
    p_run.add_argument("--out", default=None, help="Write the records to this path")
    p_run.add_argument("--format", choices=("csv", "json"), default=None, help="Report format (default: config's)")
    p_run.add_argument("--seed", type=int, default=None, help="Override every suite's seed")
    p_run.add_argument("--threads", type=int, default=None, help="Suites run concurrently (default IDEALCALC_THREADS)")
    p_run.set_defaults(handler=cmd_run)

    p_norms = sub.add_parser("norms", help="Quasi-norms of a sequence in registered spaces")
    p_norms.add_argument("--space", action="append", default=None, help="Space spec; repeatable (default: all registered)")
    p_norms.add_argument("--seq", required=True, help="Comma-separated reals, e.g. 1,1,0")
    p_norms.set_defaults(handler=cmd_norms)

    p_dnorm = sub.add_parser("dnorm", help="Estimate the norm of the inner derivation [a, .] : I -> J")
    p_dnorm.add_argument("--space-i", required=True, help="Domain ideal, e.g. schatten:p=2")
    p_dnorm.add_argument("--space-j", required=True, help="Target ideal, e.g. schatten:p=1")
    p_dnorm.add_argument("--matrix", required=True, help="Generator a in the plain-text matrix format")
    p_dnorm.add_argument("--budget", default=f"{DEFAULT_RESTARTS},{DEFAULT_ASCENT_STEPS}", help="restarts,steps")
    p_dnorm.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p_dnorm.set_defaults(handler=cmd_dnorm)
    return parser


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _setup_logging(args.verbose)
    try:
        return args.handler(args)
    except (ConfigError, InvalidArgumentError, OSError) as exc:
        print(f"idealcalc: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericFailureError as exc:
        print(f"idealcalc: numeric failure: {exc}", file=sys.stderr)
        return EXIT_FAILED
    except IdealCalcError as exc:
        logger.error("%s", exc)
        return EXIT_FAILED


if __name__ == "__main__":
    raise SystemExit(main())
