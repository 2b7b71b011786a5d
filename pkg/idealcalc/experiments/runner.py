from __future__ import annotations

import csv
import json
import logging
import os
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone
from typing import Dict, Iterable, List, Optional, Union

from pydantic import ValidationError

from ..config import settings
from ..errors import ConfigError, InvalidArgumentError
from .schemas import CSV_COLUMNS, CheckRecord, ExperimentConfig, ExperimentReport, SuiteConfig, Summary
from .suites import SUITES

logger = logging.getLogger(__name__)

PathLike = Union[str, os.PathLike]


def load_config(path: PathLike) -> ExperimentConfig:
    """Read and validate a TOML experiment config; every failure is a ConfigError."""
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config {path} is not valid TOML: {exc}") from exc
    return parse_config(raw)


def parse_config(raw: Dict) -> ExperimentConfig:
    try:
        return ExperimentConfig.model_validate(raw)
    except ValidationError as exc:
        raise ConfigError(f"invalid experiment config:\n{exc}") from exc


def with_seed(config: ExperimentConfig, seed: int) -> ExperimentConfig:
    """Copy of config with every suite's seed replaced."""
    suites = [s.model_copy(update={"seed": seed}) for s in config.suites]
    return config.model_copy(update={"suites": suites})


def run_suite(suite: SuiteConfig) -> List[CheckRecord]:
    try:
        records = SUITES[suite.name](suite)
    except InvalidArgumentError as exc:
        raise ConfigError(f"suite {suite.name}: {exc}") from exc
    failed = sum(1 for r in records if not r.passed)
    logger.info("suite %s: %d checks, %d failed", suite.name, len(records), failed)
    return records


def summarize(records: Iterable[CheckRecord]) -> Summary:
    records = list(records)
    passed = sum(1 for r in records if r.passed)
    violations = [max(0.0, -r.margin) for r in records if r.margin is not None]
    return Summary(
        total=len(records),
        passed=passed,
        failed=len(records) - passed,
        max_violation=max(violations, default=0.0),
    )


def run(config: ExperimentConfig, threads: Optional[int] = None) -> ExperimentReport:
    """Execute every suite of config; records come back in canonical (suite, params) order."""
    workers = max(1, int(threads if threads is not None else settings.THREADS))
    suites = list(config.suites)
    if workers > 1 and len(suites) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            batches = list(pool.map(run_suite, suites))
    else:
        batches = [run_suite(s) for s in suites]
    records = sorted((r for batch in batches for r in batch), key=lambda r: (r.suite, r.params))
    return ExperimentReport(
        records=records,
        summary=summarize(records),
        generated_at=datetime.now(timezone.utc).isoformat(),
    )


def _csv_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(records: Iterable[CheckRecord], path: PathLike) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for r in records:
            row = r.model_dump()
            writer.writerow([_csv_value(row[c]) for c in CSV_COLUMNS])


def write_json(records: Iterable[CheckRecord], path: PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump([r.model_dump() for r in records], fh, indent=2)
        fh.write("\n")


def write_report(report: ExperimentReport, path: PathLike, fmt: str = "json") -> None:
    if fmt == "csv":
        write_csv(report.records, path)
    elif fmt == "json":
        write_json(report.records, path)
    else:
        raise ConfigError(f"unknown report format {fmt!r}")
    logger.info("wrote %d records to %s", len(report.records), path)


def format_summary(report: ExperimentReport) -> str:
    """Per-suite table followed by the overall totals."""
    per_suite: Dict[str, List[CheckRecord]] = {}
    for r in report.records:
        per_suite.setdefault(r.suite, []).append(r)
    width = max([len("suite")] + [len(name) for name in per_suite])
    lines = [f"{'suite':<{width}}  {'checks':>7}  {'passed':>7}  {'max violation':>14}"]
    for name, records in per_suite.items():
        s = summarize(records)
        lines.append(f"{name:<{width}}  {s.total:>7d}  {s.passed:>7d}  {s.max_violation:>14.3e}")
    s = report.summary
    lines.append(f"{'total':<{width}}  {s.total:>7d}  {s.passed:>7d}  {s.max_violation:>14.3e}")
    lines.append("PASS" if report.success else f"FAIL ({s.failed} failed)")
    return "\n".join(lines)
