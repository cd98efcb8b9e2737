"""Command-line surface: rpbs verify | expr | matrix | spectrum | evolve | reach | catalog | gram."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import TYPE_CHECKING

from loguru import logger
from pydantic import ValidationError

from apps.rpbs.cli.common import EXIT_FAILED, EXIT_USAGE, configure_logging, ket_flag, order_flag, pair_flag, window_flag
from apps.rpbs.cli.export_commands import cmd_catalog, cmd_gram
from apps.rpbs.cli.expr_commands import cmd_expr
from apps.rpbs.cli.spectral_commands import cmd_evolve, cmd_matrix, cmd_spectrum
from apps.rpbs.cli.verify_commands import cmd_reach, cmd_verify
from apps.rpbs.constants import DEFAULT_COUPLING, DEFAULT_OMEGA_B, DEFAULT_OMEGA_F
from apps.rpbs.exceptions import ConfigError, RpbsError
from apps.rpbs.models import CheckName
from config.settings import get_settings

if TYPE_CHECKING:
    from collections.abc import Sequence


def _add_hamiltonian_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--wb", default=str(DEFAULT_OMEGA_B), help="paraboson quantum energy omega_b")
    parser.add_argument("--wf", default=str(DEFAULT_OMEGA_F), help="level gap omega_f")
    parser.add_argument("--lambda", dest="coupling", default=str(DEFAULT_COUPLING), help="coupling lambda")


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subcommand per operation."""
    settings = get_settings()
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--log-level", default=None, help="loguru level (default from settings)")
    shared.add_argument("--output-dir", type=Path, default=None, help="directory for report files")
    parser = argparse.ArgumentParser(prog="rpbs", description="Exact engine for the Fock-like representations of P_BF^(1,1)")
    commands = parser.add_subparsers(dest="command", required=True)

    verify = commands.add_parser("verify", parents=[shared], help="run the verification suite")
    verify.add_argument("--p", type=order_flag, nargs="+", default=None, help="orders to verify")
    verify.add_argument("--window", type=window_flag, default=None)
    verify.add_argument("--guard", type=int, default=None)
    verify.add_argument("--checks", nargs="+", choices=[name.value for name in CheckName], default=None)
    verify.add_argument("--family-bound", type=int, default=None, help="largest exponent of the lemma families")
    verify.add_argument("--config", default=None, help="JSON run file")
    verify.add_argument("--mutate", action="store_true", help="corrupt one relation to test the harness")
    verify.add_argument("--format", choices=["json", "csv"], default=None, help="report format (default json, or the run file's output_format)")
    verify.set_defaults(handler=cmd_verify)

    expr = commands.add_parser("expr", parents=[shared], help="check an identity or apply an operator")
    expr.add_argument("text", help='operator expression, e.g. "[{f+,b-},b+] - 2*f+"')
    expr.add_argument("--p", type=order_flag, default=2)
    expr.add_argument("--window", type=window_flag, default=settings.default_window)
    expr.add_argument("--apply", type=ket_flag, default=None, metavar="m,n,a|b")
    expr.set_defaults(handler=cmd_expr)

    matrix = commands.add_parser("matrix", parents=[shared], help="exact matrix of an operator on a block")
    matrix.add_argument("--op", default="T")
    matrix.add_argument("--p", type=order_flag, default=2)
    where = matrix.add_mutually_exclusive_group(required=True)
    where.add_argument("--block", type=pair_flag, default=None, metavar="m,n")
    where.add_argument("--K", type=int, default=None)
    matrix.add_argument("--format", choices=["json", "csv"], default="json")
    matrix.set_defaults(handler=cmd_matrix)

    spectrum = commands.add_parser("spectrum", parents=[shared], help="eigenvalues of H on a K-block")
    spectrum.add_argument("--p", type=order_flag, default=2)
    spectrum.add_argument("--K", type=int, required=True)
    _add_hamiltonian_flags(spectrum)
    spectrum.add_argument("--format", choices=["json", "csv"], default="json")
    spectrum.set_defaults(handler=cmd_spectrum)

    evolve = commands.add_parser("evolve", parents=[shared], help="unitary dynamics inside a K-block")
    evolve.add_argument("--p", type=order_flag, default=2)
    evolve.add_argument("--ket", type=ket_flag, required=True, metavar="m,n,a|b")
    evolve.add_argument("--t-max", type=float, default=50.0)
    evolve.add_argument("--steps", type=int, default=101)
    _add_hamiltonian_flags(evolve)
    evolve.add_argument("--format", choices=["json", "csv"], default="csv")
    evolve.set_defaults(handler=cmd_evolve)

    reach = commands.add_parser("reach", parents=[shared], help="cyclicity of the vacuum")
    reach.add_argument("--p", type=order_flag, default=2)
    reach.add_argument("--window", type=window_flag, default=settings.default_window)
    reach.add_argument("--guard", type=int, default=settings.default_guard)
    reach.set_defaults(handler=cmd_reach)

    catalog = commands.add_parser("catalog", parents=[shared], help="export the relation catalog as JSON")
    catalog.add_argument("--family-bound", type=int, default=None, help="also export the families up to this exponent")
    catalog.set_defaults(handler=cmd_catalog)

    gram = commands.add_parser("gram", parents=[shared], help="export the exact Gram block of V_{m,n} as JSON")
    gram.add_argument("--p", type=order_flag, default=2)
    gram.add_argument("--block", type=pair_flag, required=True, metavar="m,n")
    gram.set_defaults(handler=cmd_gram)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """Parse arguments, run one command and map engine errors to exit codes."""
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)
    logger.info(f"rpbs {args.command} starting")
    try:
        code: int = args.handler(args)
    except (ConfigError, ValidationError, ValueError) as e:
        logger.warning(f"{args.command}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except RpbsError as e:
        logger.warning(f"{args.command}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAILED
    logger.info(f"rpbs {args.command} finished with exit code {code}")
    return code
