"""Experiment harness: TOML-configured suites of numerical checks and their reports."""

from . import schemas, suites, runner

__all__ = ["schemas", "suites", "runner"]
