"""
Report models for invariant suites and their published JSON schema.
"""
import json
import math
from enum import Enum
from typing import Any, Callable, Dict, List, Optional

import jsonschema
import numpy as np
from pydantic import BaseModel, Field, computed_field, field_validator

from ..config import config
from ..core import FVec, FlatVec

REPORT_VERSION = "report-v1"


class Provenance(str, Enum):
    """Where a case's expected value comes from"""
    PUBLISHED = "PUBLISHED"  # a stated result of the theory
    TRIVIAL = "TRIVIAL"      # immediate from the definitions
    DERIVED = "DERIVED"      # worked out here, e.g. a closed form or hand enumeration


def jsonable(value: Any) -> Any:
    """Plain JSON data; non-finite floats become the strings 'inf', '-inf', 'nan'"""
    if isinstance(value, (FVec, FlatVec)):
        return value.to_dict()
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [jsonable(v) for v in value.tolist()]
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)
    if isinstance(value, Enum):
        return value.value
    return value


class CaseRecord(BaseModel):
    """One checked property of one generated case"""
    case: int = 0
    check: str
    provenance: Provenance
    anchor: Optional[str] = None
    inputs: Dict[str, Any] = Field(default_factory=dict)
    expected: Any = None
    observed: Any = None
    tolerance: Optional[float] = None
    passed: bool
    detail: Optional[Dict[str, Any]] = None

    @field_validator("inputs", "expected", "observed", "detail", mode="before")
    @classmethod
    def _plain(cls, value: Any) -> Any:
        return jsonable(value)


class Report(BaseModel):
    version: str = Field(default_factory=lambda: config.get("harness.report_version", REPORT_VERSION))
    suite: str
    seed: int
    n_cases: int
    tol: Optional[float] = None
    runtime: float = 0.0
    cases: List[CaseRecord] = Field(default_factory=list)

    @computed_field
    @property
    def n_passed(self) -> int:
        return sum(1 for c in self.cases if c.passed)

    @computed_field
    @property
    def n_failed(self) -> int:
        return len(self.cases) - self.n_passed

    @property
    def passed(self) -> bool:
        return self.n_failed == 0

    def failures(self) -> List[CaseRecord]:
        return [c for c in self.cases if not c.passed]

    def case_table(self) -> str:
        """Canonical JSON of the case records; runtime is excluded"""
        return json.dumps([c.model_dump(mode="json") for c in self.cases], sort_keys=True)

    def to_json(self, indent: Optional[int] = 2) -> str:
        return self.model_dump_json(indent=indent)


def check(name: str, passed: bool, provenance: Provenance, anchor: Optional[str] = None,
          inputs: Optional[Dict[str, Any]] = None, expected: Any = None, observed: Any = None,
          tolerance: Optional[float] = None,
          detail: Optional[Callable[[], Dict[str, Any]]] = None) -> CaseRecord:
    """
    Build a case record. `detail` is called only for failures and should return
    the certificates needed to replay the case.
    """
    passed = bool(passed)
    return CaseRecord(check=name, passed=passed, provenance=provenance, anchor=anchor,
                      inputs=inputs or {}, expected=expected, observed=observed, tolerance=tolerance,
                      detail=detail() if detail is not None and not passed else None)


def report_schema() -> Dict[str, Any]:
    """JSON schema of serialized reports"""
    schema = Report.model_json_schema(mode="serialization")
    schema["description"] = f"banachkit suite report, schema {REPORT_VERSION}"
    return schema


def validate_report(data: Any) -> None:
    """Raise jsonschema.ValidationError unless `data` (dict or JSON text) is a valid report"""
    if isinstance(data, Report):
        data = data.model_dump(mode="json")
    elif isinstance(data, str):
        data = json.loads(data)
    jsonschema.validate(instance=data, schema=report_schema())
