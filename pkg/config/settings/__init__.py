"""Settings selection via the RPBS_SETTINGS_MODULE environment variable."""

from __future__ import annotations

import importlib
import os
from functools import cache
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from config.settings.base import Settings

SETTINGS_MODULE_ENV = "RPBS_SETTINGS_MODULE"
DEFAULT_SETTINGS_MODULE = "config.settings.base"


@cache
def get_settings() -> Settings:
    """Return the settings of the module named by RPBS_SETTINGS_MODULE."""
    module = importlib.import_module(os.environ.get(SETTINGS_MODULE_ENV, DEFAULT_SETTINGS_MODULE))
    settings: Settings = module.SETTINGS
    return settings
