"""Deterministic JSON and CSV exports for reports, matrices, spectra and trajectories."""

from __future__ import annotations

import csv
import json
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import TYPE_CHECKING

import numpy as np
from pydantic import BaseModel

from apps.rpbs.constants import SCHEMA_VERSION
from config.settings import get_settings

if TYPE_CHECKING:
    from apps.rpbs.services.spectra import Trajectory

TRAJECTORY_HEADER = ["t", "ket", "re", "im", "abs2"]


def _round(value: float, precision: int) -> float:
    rounded = round(value, precision)
    # -0.0 and 0.0 must serialize identically
    return rounded + 0.0


class ReportSerializer:
    """Turns engine results into plain JSON-ready data with floats rounded to a fixed precision."""

    def __init__(self, precision: int | None = None) -> None:
        self.precision = get_settings().float_precision if precision is None else precision

    def normalize(self, value: object) -> object:
        """Recursively convert models, fractions, complex numbers and numpy scalars.

        Args:
            value: Any engine output

        Returns:
            Data made of dicts, lists, strings, ints, floats, bools and None
        """
        match value:
            case BaseModel():
                return self.normalize(value.model_dump())
            case bool() | None | str():
                return value
            case Enum():
                return value.value
            case int():
                return value
            case Fraction():
                return str(value)
            case float() | np.floating():
                return _round(float(value), self.precision)
            case complex() | np.complexfloating():
                number = complex(value)
                return {"re": _round(number.real, self.precision), "im": _round(number.imag, self.precision)}
            case np.integer():
                return int(value)
            case np.ndarray():
                return self.normalize(value.tolist())
            case Path():
                return str(value)
            case dict():
                return {str(self.normalize(key)): self.normalize(item) for key, item in value.items()}
            case list() | tuple():
                return [self.normalize(item) for item in value]
        return str(value)

    def to_json(self, payload: object) -> str:
        """Serialize with sorted keys and a schema field; identical input gives identical bytes."""
        data = self.normalize(payload)
        if isinstance(data, dict):
            data.setdefault("schema", SCHEMA_VERSION)
        else:
            data = {"schema": SCHEMA_VERSION, "data": data}
        return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"

    def write_json(self, path: Path, payload: object) -> Path:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.to_json(payload), encoding="utf-8")
        return path

    def trajectory_rows(self, trajectory: Trajectory) -> list[list[str]]:
        """One row per (time, ket): t, ket label, Re c, Im c, |c|^2."""
        rows: list[list[str]] = []
        for point in trajectory.points:
            for label in trajectory.basis:
                coefficient = point.coefficients[label]
                rows.append(
                    [
                        repr(_round(point.time, self.precision)),
                        label,
                        repr(_round(coefficient.real, self.precision)),
                        repr(_round(coefficient.imag, self.precision)),
                        repr(_round(abs(coefficient) ** 2, self.precision)),
                    ]
                )
        return rows

    def write_trajectory_csv(self, path: Path, trajectory: Trajectory) -> Path:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(TRAJECTORY_HEADER)
            writer.writerows(self.trajectory_rows(trajectory))
        return path

    def write_table_csv(self, path: Path, header: list[str], rows: list[list[object]]) -> Path:
        """Generic CSV table (matrices and spectra when csv output is requested)."""
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(header)
            writer.writerows([[self.normalize(cell) for cell in row] for row in rows])
        return path
