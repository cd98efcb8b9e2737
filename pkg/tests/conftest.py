"""Pytest configuration and fixtures for the RPBS engine."""

from __future__ import annotations

import os

os.environ.setdefault("RPBS_SETTINGS_MODULE", "config.settings.test")

from typing import TYPE_CHECKING  # noqa: E402

import pytest  # noqa: E402

from apps.rpbs.models import HamiltonianParams, RepParams  # noqa: E402
from tests.factories import HamiltonianParamsFactory, RepParamsFactory  # noqa: E402

if TYPE_CHECKING:
    from pathlib import Path


@pytest.fixture
def params() -> RepParams:
    """Order 2 on a window large enough for every word in the catalog."""
    return RepParamsFactory()


@pytest.fixture
def params_p1() -> RepParams:
    """Order 1: no beta kets at all."""
    return RepParamsFactory(p=1)


@pytest.fixture
def hamiltonian_params() -> HamiltonianParams:
    return HamiltonianParamsFactory()


@pytest.fixture
def output_dir(tmp_path: Path) -> Path:
    """Fresh directory for report files."""
    target = tmp_path / "results"
    target.mkdir()
    return target
