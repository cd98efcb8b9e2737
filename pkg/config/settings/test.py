"""Test settings for the RPBS Fock engine."""

from __future__ import annotations

import tempfile
from pathlib import Path

from config.settings.base import build_settings

__all__ = ["SETTINGS"]

SETTINGS = build_settings(
    output_dir=Path(tempfile.gettempdir()) / "rpbs-test-results",
    log_level="WARNING",
    worker_pool_size=2,
)
