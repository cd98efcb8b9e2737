"""catalog and gram commands: JSON exports for documentation tooling."""

from __future__ import annotations

from typing import TYPE_CHECKING

from loguru import logger

from apps.rpbs.cli.common import EXIT_OK, output_dir, rep_params
from apps.rpbs.exceptions import ConfigError
from apps.rpbs.serializers import ReportSerializer
from apps.rpbs.services.catalog import catalog_export
from apps.rpbs.services.metric import gram_block

if TYPE_CHECKING:
    import argparse


def cmd_catalog(args: argparse.Namespace) -> int:
    """Write the relation catalog (plus family instances up to --family-bound) to catalog.json."""
    if args.family_bound is not None and args.family_bound < 0:
        msg = f"--family-bound must be nonnegative, got {args.family_bound}"
        raise ConfigError(msg)
    rows = catalog_export(args.family_bound)
    target = ReportSerializer().write_json(output_dir(args) / "catalog.json", {"family_bound": args.family_bound, "relations": rows})
    logger.debug(f"Exported {len(rows)} catalog entries")
    print(f"{len(rows)} relations")
    print(f"catalog: {target}")
    return EXIT_OK


def cmd_gram(args: argparse.Namespace) -> int:
    m, n = args.block
    block = gram_block(rep_params(args.p, m), m, n)
    target = ReportSerializer().write_json(output_dir(args) / f"gram_p{args.p}_{m}-{n}.json", block.as_export())
    for row in block.kets:
        print(f"{row.label:>10}  " + "  ".join(f"{block.entry(row, column)!s:>8}" for column in block.kets))
    print("leading minors: " + ", ".join(str(value) for value in block.leading_minors()))
    print(f"gram: {target}")
    return EXIT_OK
