"""expr command: state an identity or apply an operator to a ket."""

from __future__ import annotations

from typing import TYPE_CHECKING

from loguru import logger

from apps.rpbs.cli.common import EXIT_FAILED, EXIT_OK, EXIT_USAGE, report_expression_error, rep_params
from apps.rpbs.exceptions import ConfigError, ExpressionError
from apps.rpbs.models import State
from apps.rpbs.parsers import parse_relation
from apps.rpbs.services.algebra import check_identity, evaluate
from apps.rpbs.services.fock import is_canonical

if TYPE_CHECKING:
    import argparse


def cmd_expr(args: argparse.Namespace) -> int:
    """Check `expr = 0` (or `lhs = rhs`) on the window, or print the image of --apply ket.

    Exit codes: 0 when the identity holds (or the image was printed), 1 when it fails,
    2 when the expression does not parse.
    """
    try:
        element = parse_relation(args.text)
    except ExpressionError as e:
        report_expression_error(args.text, e)
        return EXIT_USAGE
    logger.debug(f"{args.text} expands to {element}")

    params = rep_params(args.p, args.window)
    if args.apply is not None:
        ket = args.apply
        if not is_canonical(ket, params.with_window(ket.m)):
            msg = f"{ket} is not a canonical basis ket for p={params.p}"
            raise ConfigError(msg)
        working = params.with_window(max(params.window_m, ket.m + element.max_word_length()))
        print(evaluate(element, State.ket(ket), working))
        return EXIT_OK

    if element.max_word_length() > params.window_m:
        msg = f"Window {params.window_m} is shorter than the longest word ({element.max_word_length()}); raise --window"
        raise ConfigError(msg)
    report = check_identity(element, params)
    top = params.window_m - element.max_word_length()
    if report.holds:
        print(f"holds on {report.kets_checked} kets (p={params.p}, m <= {top})")
        return EXIT_OK
    print(f"fails on {report.counterexample_ket}: image {report.counterexample_image}")
    return EXIT_FAILED
