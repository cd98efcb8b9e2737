"""matrix, spectrum and evolve commands."""

from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np

from apps.rpbs.cli.common import (
    EXIT_FAILED,
    EXIT_OK,
    EXIT_USAGE,
    hamiltonian_params,
    output_dir,
    rep_params,
    report_expression_error,
)
from apps.rpbs.constants import UNITARITY_TOLERANCE
from apps.rpbs.exceptions import BlockEscape, ConfigError, ExpressionError
from apps.rpbs.models import State
from apps.rpbs.parsers import parse_expression
from apps.rpbs.serializers import ReportSerializer
from apps.rpbs.services.fock import block_kets, is_canonical
from apps.rpbs.services.spectra import evolve, k_block, materialize, spectrum

if TYPE_CHECKING:
    import argparse


def cmd_matrix(args: argparse.Namespace) -> int:
    """Exact matrix of an operator on one V_{m,n} (--block) or one K-block (--K)."""
    try:
        element = parse_expression(args.op)
    except ExpressionError as e:
        report_expression_error(args.op, e)
        return EXIT_USAGE

    if args.block is not None:
        m, n = args.block
        kets = block_kets(m, n, args.p)
        label, slug = f"{m},{n}", f"{m}-{n}"
    else:
        kets = k_block(args.p, args.K).kets
        label, slug = f"K={args.K}", f"K{args.K}"
    if not kets:
        msg = f"Block {label} is empty for p={args.p}"
        raise ConfigError(msg)
    working = rep_params(args.p, max(ket.m for ket in kets) + element.max_word_length())
    try:
        matrix = materialize(element, working, kets, label=label)
    except BlockEscape as e:
        print(f"error: {args.op} does not preserve block {label}: {e}")
        return EXIT_FAILED

    serializer = ReportSerializer()
    stem = output_dir(args) / f"matrix_p{args.p}_{slug}"
    if args.format == "csv":
        basis = [ket.label for ket in matrix.kets]
        rows: list[list[object]] = [[row_label, *entries] for row_label, entries in zip(basis, matrix.entry_strings(), strict=True)]
        target = serializer.write_table_csv(stem.with_suffix(".csv"), ["basis", *basis], rows)
    else:
        target = serializer.write_json(stem.with_suffix(".json"), {"p": args.p, "operator": args.op, **matrix.as_export()})
    for ket, entries in zip(matrix.kets, matrix.entry_strings(), strict=True):
        print(f"{ket.label:>10}  " + "  ".join(f"{entry:>8}" for entry in entries))
    print(f"matrix: {target}")
    return EXIT_OK


def cmd_spectrum(args: argparse.Namespace) -> int:
    """Ascending eigenvalues of H on the K-block."""
    params = rep_params(args.p, args.K)
    h = hamiltonian_params(args)
    result = spectrum(params, h, args.K)

    serializer = ReportSerializer()
    stem = output_dir(args) / f"spectrum_p{args.p}_K{args.K}"
    if args.format == "csv":
        rows: list[list[object]] = [[index, value] for index, value in enumerate(result.eigenvalues)]
        target = serializer.write_table_csv(stem.with_suffix(".csv"), ["index", "eigenvalue"], rows)
    else:
        target = serializer.write_json(stem.with_suffix(".json"), {"hamiltonian": h, **result.model_dump()})
    print("eigenvalues: " + ", ".join(f"{value:.{serializer.precision}g}" for value in result.eigenvalues))
    print(f"spectrum: {target}")
    return EXIT_OK


def cmd_evolve(args: argparse.Namespace) -> int:
    """exp(-iHt) applied to --ket inside its K-block; exit 1 if the norm drifts."""
    ket = args.ket
    params = rep_params(args.p, ket.m)
    if not is_canonical(ket, params):
        msg = f"{ket} is not a canonical basis ket for p={params.p}"
        raise ConfigError(msg)
    if args.steps < 1 or args.t_max < 0:
        msg = f"Need --steps >= 1 and --t-max >= 0, got {args.steps} and {args.t_max}"
        raise ConfigError(msg)
    h = hamiltonian_params(args)
    K = ket.m + ket.n
    times = np.linspace(0.0, args.t_max, args.steps).tolist()
    trajectory = evolve(params, h, K, State.ket(ket), times)

    serializer = ReportSerializer()
    stem = output_dir(args) / f"evolve_p{args.p}_{ket.m}-{ket.n}-{ket.tag.value}"
    if args.format == "json":
        target = serializer.write_json(stem.with_suffix(".json"), {"hamiltonian": h, **trajectory.model_dump()})
    else:
        target = serializer.write_trajectory_csv(stem.with_suffix(".csv"), trajectory)
    print(f"K={K} dim={len(trajectory.basis)} samples={len(trajectory.points)} max norm drift={trajectory.max_norm_drift:.3e}")
    print(f"trajectory: {target}")
    return EXIT_OK if trajectory.max_norm_drift <= UNITARITY_TOLERANCE else EXIT_FAILED
