"""Runtime settings for the RPBS Fock engine."""

from __future__ import annotations

import os
from pathlib import Path

from pydantic import BaseModel, ConfigDict

BASE_DIR = Path(__file__).resolve().parent.parent.parent

OUTPUT_DIR_ENV = "RPBS_OUTPUT_DIR"


class Settings(BaseModel):
    """Process-wide settings; one frozen instance per settings module."""

    model_config = ConfigDict(frozen=True)

    output_dir: Path = BASE_DIR / "results"
    log_level: str = "INFO"
    worker_pool_size: int = 4
    float_precision: int = 12
    default_window: int = 8
    default_guard: int = 3


def build_settings(**overrides: object) -> Settings:
    """Build settings, letting the environment override the output directory.

    Args:
        **overrides: Field values replacing the defaults before env overrides apply

    Returns:
        Frozen settings instance
    """
    values: dict[str, object] = dict(overrides)
    output_dir = os.environ.get(OUTPUT_DIR_ENV)
    if output_dir:
        values["output_dir"] = Path(output_dir)
    return Settings.model_validate(values)


SETTINGS = build_settings()
