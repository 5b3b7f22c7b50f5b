"""
Thread-safe collection of case records produced by concurrent suite workers.
"""
import threading
from typing import Dict, List

from .report import CaseRecord


class ResultCollector:
    """Records arrive in any order; `records()` returns them ordered by case index"""

    def __init__(self):
        self._records: Dict[int, List[CaseRecord]] = {}
        self._lock = threading.Lock()

    def add(self, case: int, records: List[CaseRecord]) -> None:
        stamped = [r.model_copy(update={"case": case}) for r in records]
        with self._lock:
            if case in self._records:
                raise ValueError(f"Case {case} was already collected")
            self._records[case] = stamped

    def records(self) -> List[CaseRecord]:
        with self._lock:
            return [r for case in sorted(self._records) for r in self._records[case]]

    def __len__(self) -> int:
        with self._lock:
            return len(self._records)
