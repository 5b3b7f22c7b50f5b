"""
Suite registry and runner.

A suite is a function that draws its cases from a seeded generator and returns
one zero-argument callable per case; the runner evaluates those callables
concurrently and assembles the report in case order.
"""
import logging
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

import numpy as np

from ..config import config
from ..errors import BanachkitError, EvaluationError, InvalidParameterError
from ..spaces import SpaceEvaluator
from .collector import ResultCollector
from .report import CaseRecord, Provenance, Report, check

CaseFn = Callable[[], List[CaseRecord]]


@dataclass
class SuiteContext:
    """Everything a suite may draw on while generating cases"""
    seed: int
    n_cases: int
    tol: Optional[float] = None
    evaluator: SpaceEvaluator = field(default_factory=SpaceEvaluator)
    rng: np.random.Generator = field(init=False)

    def __post_init__(self):
        self.rng = np.random.default_rng(self.seed)

    def tolerance(self, default: float) -> float:
        """The global override when one was given, else the check's own tolerance"""
        return default if self.tol is None else self.tol


SuiteFunc = Callable[[SuiteContext], List[CaseFn]]


@dataclass
class SuiteDefinition:
    """Suite definition with metadata"""
    name: str
    description: str
    func: SuiteFunc
    anchor: str = ""
    default_cases: int = 20


class SuiteRegistry:
    """Central registry of invariant suites"""

    def __init__(self):
        self.suites: Dict[str, SuiteDefinition] = {}
        self.logger = logging.getLogger(f"{self.__class__.__name__}")

    def register_suite(self, suite: SuiteDefinition) -> None:
        if suite.name in self.suites:
            self.logger.warning(f"Suite {suite.name} already registered, overwriting")
        self.suites[suite.name] = suite
        self.logger.debug(f"Registered suite: {suite.name}")

    def register_function(self, name: str, func: SuiteFunc, description: Optional[str] = None,
                          anchor: str = "", default_cases: int = 20) -> None:
        """Register a function directly as a suite"""
        self.register_suite(SuiteDefinition(
            name=name,
            description=description or (func.__doc__ or "").strip(),
            func=func,
            anchor=anchor,
            default_cases=default_cases,
        ))

    def suite(self, name: str, anchor: str = "", default_cases: int = 20) -> Callable[[SuiteFunc], SuiteFunc]:
        """Decorator form of register_function"""
        def decorator(func: SuiteFunc) -> SuiteFunc:
            self.register_function(name, func, anchor=anchor, default_cases=default_cases)
            return func
        return decorator

    def get(self, name: str) -> SuiteDefinition:
        if name not in self.suites:
            raise InvalidParameterError(f"Unknown suite {name!r}; available: {', '.join(sorted(self.suites))}")
        return self.suites[name]

    def has_suite(self, name: str) -> bool:
        return name in self.suites

    def get_available_suites(self) -> Dict[str, Dict]:
        return {
            name: {"name": s.name, "description": s.description, "anchor": s.anchor,
                   "default_cases": s.default_cases}
            for name, s in sorted(self.suites.items())
        }


def _error_record(e: Exception) -> CaseRecord:
    detail = {"error": type(e).__name__, "message": str(e)}
    if isinstance(e, EvaluationError):
        detail.update({"path": e.path, "size_error": e.is_size_error})
    return check("error", False, Provenance.TRIVIAL, observed=str(e), detail=lambda: detail)


class SuiteRunner:
    """Runs suites from a registry; case failures and errors never escape as exceptions"""

    def __init__(self, registry: SuiteRegistry, max_workers: Optional[int] = None):
        self.registry = registry
        self.max_workers = max_workers or int(config.get("harness.max_workers", 4))
        self.logger = logging.getLogger(f"{self.__class__.__name__}")

    def _run_case(self, index: int, case: CaseFn) -> List[CaseRecord]:
        try:
            return case()
        except BanachkitError as e:
            self.logger.warning(f"Case {index} raised {type(e).__name__}: {e}")
            return [_error_record(e)]
        except Exception as e:
            self.logger.error(f"Case {index} crashed: {e}", exc_info=True)
            return [_error_record(e)]

    def run(self, name: str, seed: int = 0, n_cases: Optional[int] = None, tol: Optional[float] = None,
            evaluator: Optional[SpaceEvaluator] = None) -> Report:
        suite = self.registry.get(name)
        n_cases = suite.default_cases if n_cases is None else int(n_cases)
        if n_cases < 1:
            raise InvalidParameterError(f"n_cases must be >= 1, got {n_cases}")

        self.logger.info(f"Running suite {name} (seed={seed}, cases={n_cases})")
        started = time.perf_counter()
        ctx = SuiteContext(seed=seed, n_cases=n_cases, tol=tol, evaluator=evaluator or SpaceEvaluator())
        cases = suite.func(ctx)

        collector = ResultCollector()
        with ThreadPoolExecutor(max_workers=self.max_workers) as pool:
            futures = {pool.submit(self._run_case, i, case): i for i, case in enumerate(cases)}
            for future in as_completed(futures):
                collector.add(futures[future], future.result())

        report = Report(suite=name, seed=seed, n_cases=n_cases, tol=tol,
                        runtime=time.perf_counter() - started, cases=collector.records())
        log = self.logger.info if report.passed else self.logger.warning
        log(f"Suite {name}: {report.n_passed}/{len(report.cases)} checks passed in {report.runtime:.2f}s")
        return report

    def run_batch(self, names: List[str], seed: int = 0, n_cases: Optional[int] = None,
                  tol: Optional[float] = None) -> List[Report]:
        return [self.run(name, seed, n_cases, tol) for name in names]


# Global registry instance; suites register themselves on import of banachkit.harness.suites
default_registry = SuiteRegistry()
