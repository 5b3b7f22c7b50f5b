"""
Gauge tables for the two normalized flat families.

* "unbounded": x_n = n^(-1/p) * 1_n has ||x_n||_p = 1 and ||x_n||_inf -> 0, yet
  its gauge (m * n^(1/p - 1/q) + 1/m)^(-1) increases with n toward m.
* "vanishing": x_n = n^(-1/q) * 1_n has gauge (m + n^(1/q - 1/p) / m)^(-1),
  decreasing with n toward 0 for every fixed m.
"""
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Sequence

from ..core import flat
from ..errors import InvalidParameterError
from .solver import gauge_qpm
from .types import GaugeParams

TABLE_KINDS = ("unbounded", "vanishing")


@dataclass
class FlatFamilyRow:
    n: int
    m: float
    value: float
    closed_form: float

    @property
    def rel_error(self) -> float:
        return abs(self.value - self.closed_form) / self.closed_form

    def to_dict(self) -> Dict[str, Any]:
        return {"n": self.n, "m": self.m, "value": self.value, "closed_form": self.closed_form}


@dataclass
class FlatFamilyTable:
    kind: str
    q: float
    p: float
    rows: List[FlatFamilyRow] = field(default_factory=list)

    def by_m(self) -> Dict[float, List[FlatFamilyRow]]:
        grouped: Dict[float, List[FlatFamilyRow]] = {}
        for row in self.rows:
            grouped.setdefault(row.m, []).append(row)
        return grouped

    @property
    def monotone(self) -> bool:
        """Strictly increasing in n (unbounded) or strictly decreasing (vanishing) for each m"""
        for rows in self.by_m().values():
            values = [r.value for r in sorted(rows, key=lambda r: r.n)]
            pairs = zip(values, values[1:])
            if self.kind == "unbounded" and not all(b > a for a, b in pairs):
                return False
            if self.kind == "vanishing" and not all(b < a for a, b in pairs):
                return False
        return True

    @property
    def max_rel_error(self) -> float:
        return max((r.rel_error for r in self.rows), default=0.0)

    @property
    def sup_value(self) -> float:
        return max((r.value for r in self.rows), default=0.0)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind, "q": self.q, "p": self.p,
            "monotone": self.monotone, "max_rel_error": self.max_rel_error,
            "sup_value": self.sup_value,
            "rows": [r.to_dict() for r in self.rows],
        }


def _closed_form(kind: str, n: int, q: float, p: float, m: float) -> float:
    if kind == "unbounded":
        return 1.0 / (m * n ** (1.0 / p - 1.0 / q) + 1.0 / m)
    return 1.0 / (m + n ** (1.0 / q - 1.0 / p) / m)


def flat_family_table(kind: str, params: GaugeParams, exponents: Iterable[int] = range(1, 7),
                ms: Optional[Sequence[float]] = None) -> FlatFamilyTable:
    """Gauge of x_n over n = 10^e for each m, next to its closed form"""
    if kind not in TABLE_KINDS:
        raise InvalidParameterError(f"Unknown table kind {kind!r}; expected one of {TABLE_KINDS}")
    q, p = params.q, params.p
    table = FlatFamilyTable(kind=kind, q=q, p=p)
    for m in (ms or [params.m]):
        level = params.with_m(m)
        for e in exponents:
            n = 10 ** e
            height = n ** (-1.0 / p) if kind == "unbounded" else n ** (-1.0 / q)
            value = gauge_qpm(flat(height, n), level).value
            table.rows.append(FlatFamilyRow(n=n, m=m, value=value, closed_form=_closed_form(kind, n, q, p, m)))
    return table
