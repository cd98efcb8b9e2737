#!/usr/bin/env python3
"""Entry point for running the rpbs CLI from a checkout."""

from __future__ import annotations

from apps.rpbs.cli import main

if __name__ == "__main__":
    raise SystemExit(main())
