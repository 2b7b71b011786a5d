from __future__ import annotations

import math
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, Field, conint, field_validator

from ..core.spaces import parse_space
from ..errors import InvalidArgumentError

SuiteName = Literal[
    "rearrangement",
    "quasi-norm-axioms",
    "sv-inequalities",
    "calkin-roundtrip",
    "holder-duality",
    "lorentz-marcinkiewicz-duality",
    "multiplier-sandwich",
    "derivation-sandwich",
    "zsido-bound",
    "generator-recovery",
]
SUITE_NAMES: tuple = SuiteName.__args__  # type: ignore[attr-defined]

CSV_COLUMNS = ("suite", "params", "lhs", "rhs", "margin", "tolerance", "passed", "error")


def _check_space(text: str) -> str:
    try:
        return parse_space(text).canonical()
    except InvalidArgumentError as exc:
        raise ValueError(str(exc)) from exc


class SuiteConfig(BaseModel):
    """One suite of an experiment. Unset lists fall back to the suite's defaults."""

    name: SuiteName
    spaces: Optional[List[str]] = None
    pairs: Optional[List[List[str]]] = None
    dimensions: Optional[List[conint(ge=1)]] = None
    factors: Optional[List[conint(ge=1)]] = None
    ensembles: Optional[List[Literal["gaussian", "unitary", "diagonal"]]] = None
    samples: conint(ge=1) = 20
    seed: conint(ge=0) = 0
    restarts: conint(ge=1) = 4
    ascent_steps: conint(ge=1) = 60

    @field_validator("spaces")
    @classmethod
    def _spaces_parse(cls, value: Optional[List[str]]) -> Optional[List[str]]:
        return None if value is None else [_check_space(v) for v in value]

    @field_validator("pairs")
    @classmethod
    def _pairs_parse(cls, value: Optional[List[List[str]]]) -> Optional[List[List[str]]]:
        if value is None:
            return None
        out = []
        for pair in value:
            if len(pair) != 2:
                raise ValueError(f"space pairs must have exactly two entries, got {pair!r}")
            out.append([_check_space(v) for v in pair])
        return out


class OutputConfig(BaseModel):
    path: Optional[str] = None
    format: Literal["csv", "json"] = "json"


class ExperimentConfig(BaseModel):
    suites: List[SuiteConfig] = Field(default_factory=list)
    output: OutputConfig = Field(default_factory=OutputConfig)


class CheckRecord(BaseModel):
    """One inequality lhs <= rhs; passes iff margin = rhs - lhs >= -tolerance."""

    suite: str
    params: str
    lhs: Optional[float] = None
    rhs: Optional[float] = None
    margin: Optional[float] = None
    tolerance: float = 0.0
    passed: bool
    error: Optional[str] = None

    @classmethod
    def inequality(cls, suite: str, params: Dict[str, Any], lhs: float, rhs: float,
                   tolerance: float) -> "CheckRecord":
        lhs, rhs = float(lhs), float(rhs)
        margin = rhs - lhs
        passed = math.isfinite(margin) and margin >= -tolerance
        return cls(suite=suite, params=format_params(params), lhs=lhs, rhs=rhs, margin=margin,
                   tolerance=tolerance, passed=passed)

    @classmethod
    def failure(cls, suite: str, params: Dict[str, Any], error: str) -> "CheckRecord":
        return cls(suite=suite, params=format_params(params), passed=False, error=error)


class Summary(BaseModel):
    total: int
    passed: int
    failed: int
    max_violation: float


class ExperimentReport(BaseModel):
    records: List[CheckRecord]
    summary: Summary
    # not part of the determinism contract
    generated_at: str

    @property
    def success(self) -> bool:
        return self.summary.failed == 0


def format_params(params: Dict[str, Any]) -> str:
    parts = []
    for key, value in params.items():
        if isinstance(value, float):
            value = repr(value)
        parts.append(f"{key}={value}")
    return ";".join(parts)
