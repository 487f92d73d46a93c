from datetime import datetime, timezone
from fractions import Fraction
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

from onb_uniformity.models.field import FieldTag


def rational_string(value: Fraction | int) -> str:
    """Exact rationals travel as "num/den" strings, never as floats."""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def parse_rational(text: str) -> Fraction:
    return Fraction(text)


class EigenvalueCheck(BaseModel):
    label: str
    dim: int
    field: FieldTag
    expected: str
    expected_float: float
    ratios: List[float]
    stderrs: List[float]
    passed: bool


class CheckResult(BaseModel):
    """One pass/fail verdict against a named bound; serialized with the key "pass"."""
    model_config = ConfigDict(populate_by_name=True)

    name: str
    bound_name: str
    passed: bool = Field(alias="pass")
    observed: float
    bound: float


class ReportResults(BaseModel):
    exact_values: Dict[str, str] = Field(default_factory=dict)
    float_values: Dict[str, float] = Field(default_factory=dict)
    stderr_values: Dict[str, float] = Field(default_factory=dict)

    def add_exact(self, name: str, value: Fraction | int):
        self.exact_values[name] = rational_string(value)
        self.float_values[name] = float(Fraction(value))

    def add_estimate(self, name: str, value: float, stderr: float):
        self.float_values[name] = float(value)
        self.stderr_values[name] = float(stderr)


class ExperimentSpec(BaseModel):
    """Everything needed to re-run an experiment"""
    subcommand: Literal["moments", "spectrum", "radon-verify", "covariance", "uniformity", "partition",
                        "testfn", "acceptance", "config"]
    parameters: Dict[str, Any] = Field(default_factory=dict)
    seed: Optional[int] = Field(default=None, ge=0, lt=2**64)
    output_path: Optional[str] = None
    format: Literal["json", "csv"] = "json"
    threads: Optional[int] = Field(default=None, ge=1)


class RunManifest(BaseModel):
    tool_version: str
    spec: ExperimentSpec
    started_at: datetime = Field(default_factory=lambda: datetime.now(timezone.utc))
    duration_seconds: float = 0.0
    results: ReportResults = Field(default_factory=ReportResults)
    checks: List[CheckResult] = Field(default_factory=list)
    records: List[Dict[str, Any]] = Field(default_factory=list)
    operations: Dict[str, Dict[str, Any]] = Field(default_factory=dict)

    @property
    def all_passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def add_check(self, name: str, bound_name: str, observed: float, bound: float, passed: bool | None = None):
        verdict = observed <= bound if passed is None else passed
        self.checks.append(CheckResult(name=name, bound_name=bound_name, passed=bool(verdict),
                                       observed=float(observed), bound=float(bound)))
