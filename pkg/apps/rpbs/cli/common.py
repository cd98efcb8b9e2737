"""Shared helpers for CLI commands: flag parsing, logging sink, output locations."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from loguru import logger

from apps.rpbs.constants import MAX_ORDER, MAX_WINDOW, MIN_ORDER
from apps.rpbs.exceptions import ConfigError, ExpressionError
from apps.rpbs.models import BasisKet, HamiltonianParams, RepParams, Tag
from config.settings import get_settings

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


def configure_logging(level: str | None = None) -> None:
    """Install a single stderr sink at the requested (or configured) level."""
    logger.remove()
    logger.add(sys.stderr, level=(level or get_settings().log_level).upper(), format="{time:HH:mm:ss} | {level: <7} | {message}")


def ket_flag(text: str) -> BasisKet:
    """Parse `m,n,a|b` into a basis label.

    Raises:
        argparse.ArgumentTypeError: If the spelling is not m,n,tag
    """
    parts = [part.strip() for part in text.split(",")]
    if len(parts) != 3 or not parts[0].isdigit() or not parts[1].isdigit() or parts[2] not in ("a", "b"):
        msg = f"Expected m,n,a or m,n,b (e.g. 2,1,a), got {text!r}"
        raise argparse.ArgumentTypeError(msg)
    return BasisKet(int(parts[0]), int(parts[1]), Tag(parts[2]))


def pair_flag(text: str) -> tuple[int, int]:
    """Parse `m,n` into a block index.

    Raises:
        argparse.ArgumentTypeError: If the spelling is not two nonnegative integers
    """
    parts = [part.strip() for part in text.split(",")]
    if len(parts) != 2 or not all(part.isdigit() for part in parts):
        msg = f"Expected m,n (e.g. 1,1), got {text!r}"
        raise argparse.ArgumentTypeError(msg)
    return int(parts[0]), int(parts[1])


def order_flag(text: str) -> int:
    """Parse an order p within the accepted range."""
    try:
        value = int(text)
    except ValueError as e:
        msg = f"Order p must be an integer, got {text!r}"
        raise argparse.ArgumentTypeError(msg) from e
    if not MIN_ORDER <= value <= MAX_ORDER:
        msg = f"Order p={value} is out of range [{MIN_ORDER}, {MAX_ORDER}]"
        raise argparse.ArgumentTypeError(msg)
    return value


def window_flag(text: str) -> int:
    """Parse a window cutoff within the accepted range."""
    try:
        value = int(text)
    except ValueError as e:
        msg = f"Window must be an integer, got {text!r}"
        raise argparse.ArgumentTypeError(msg) from e
    if not 0 <= value <= MAX_WINDOW:
        msg = f"Window {value} is out of range [0, {MAX_WINDOW}]"
        raise argparse.ArgumentTypeError(msg)
    return value


def rep_params(p: int, window_m: int) -> RepParams:
    return RepParams(p=p, window_m=window_m)


def hamiltonian_params(args: argparse.Namespace) -> HamiltonianParams:
    """Frequencies and coupling from --wb/--wf/--lambda.

    Raises:
        ConfigError: If a value is not a finite real number
    """
    try:
        return HamiltonianParams(omega_b=args.wb, omega_f=args.wf, coupling=args.coupling)
    except ValueError as e:
        msg = f"Invalid Hamiltonian parameters: {e}"
        raise ConfigError(msg) from e


def output_dir(args: argparse.Namespace) -> Path:
    """--output-dir if given, else the configured directory."""
    chosen: Path | None = getattr(args, "output_dir", None)
    return chosen if chosen is not None else get_settings().output_dir


def report_expression_error(text: str, error: ExpressionError) -> None:
    """Echo the expression with a caret under the failing byte offset."""
    prefix = text.encode("utf-8")[: error.position].decode("utf-8", errors="ignore")
    print(f"error: {error.message} at offset {error.position}", file=sys.stderr)
    print(f"  {text}", file=sys.stderr)
    print(f"  {' ' * len(prefix)}^", file=sys.stderr)
