"""
Invariant suites, their registry and runner, and the versioned report format.
"""
from typing import Optional

from .collector import ResultCollector
from .registry import SuiteContext, SuiteDefinition, SuiteRegistry, SuiteRunner, default_registry
from .report import REPORT_VERSION, CaseRecord, Provenance, Report, check, report_schema, validate_report
from .suites import chain_smoke  # importing suites registers the built-in suites


def run_suite(name: str, seed: int = 0, n_cases: Optional[int] = None, tol: Optional[float] = None) -> Report:
    """Run a registered suite; deterministic given (name, seed, n_cases, tol)"""
    return SuiteRunner(default_registry).run(name, seed=seed, n_cases=n_cases, tol=tol)


__all__ = [
    "ResultCollector", "SuiteContext", "SuiteDefinition", "SuiteRegistry", "SuiteRunner", "default_registry",
    "REPORT_VERSION", "CaseRecord", "Provenance", "Report", "check", "report_schema", "validate_report",
    "chain_smoke", "run_suite",
]
