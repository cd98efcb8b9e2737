"""verify and reach commands."""

from __future__ import annotations

from pathlib import Path
from typing import TYPE_CHECKING

from loguru import logger

from apps.rpbs.cli.common import EXIT_FAILED, EXIT_OK, output_dir, rep_params
from apps.rpbs.exceptions import ConfigError
from apps.rpbs.parsers import ConfigParser
from apps.rpbs.serializers import ReportSerializer
from apps.rpbs.services.fock import cyclicity_check
from apps.rpbs.services.verification import run_verification

if TYPE_CHECKING:
    import argparse


def _load_config(args: argparse.Namespace) -> str:
    if args.config is None:
        return ""
    try:
        return Path(args.config).read_text(encoding="utf-8")
    except OSError as e:
        msg = f"Cannot read run file {args.config}: {e.strerror}"
        raise ConfigError(msg) from e


def cmd_verify(args: argparse.Namespace) -> int:
    """Run the verification suite and write verify.json (or verify.csv); exit 0 iff every check passes."""
    config = ConfigParser.parse_config(
        _load_config(args),
        orders=args.p,
        window_m=args.window,
        guard=args.guard,
        checks=args.checks,
        family_bound=args.family_bound,
        output_dir=args.output_dir,
        output_format=args.format,
        mutate=args.mutate or None,
    )
    report = run_verification(config)
    serializer = ReportSerializer()
    directory = config.output_dir or output_dir(args)
    if config.output_format == "csv":
        rows: list[list[object]] = [[result.p, result.check, str(result.passed).lower(), result.detail] for result in report.results]
        target = serializer.write_table_csv(directory / "verify.csv", ["p", "check", "passed", "detail"], rows)
    else:
        target = serializer.write_json(directory / "verify.json", report)

    for result in report.results:
        status = "ok  " if result.passed else "FAIL"
        print(f"{status} p={result.p} {result.check.value}: {result.detail}")
    print(f"report: {target}")
    if not report.passed:
        logger.warning(f"First failure: {report.first_failure}")
        return EXIT_FAILED
    return EXIT_OK


def cmd_reach(args: argparse.Namespace) -> int:
    """Cyclicity check from and to the vacuum; exit 0 iff cyclic."""
    params = rep_params(args.p, args.window)
    report = cyclicity_check(params, args.guard)
    target = output_dir(args) / f"reach_p{params.p}_w{params.window_m}_g{args.guard}.json"
    ReportSerializer().write_json(target, report)
    print(f"cyclic={str(report.cyclic).lower()} p={params.p} window={params.window_m} guard={args.guard}")
    if report.stuck:
        print(f"stuck at {report.stuck}")
    print(f"report: {target}")
    return EXIT_OK if report.cyclic else EXIT_FAILED
