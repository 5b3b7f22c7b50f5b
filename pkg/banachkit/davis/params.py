"""
Parameters of the diagonal space: exponents, the m-schedule and series truncation.
"""
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple

from ..config import config
from ..errors import InvalidParameterError, SchedulePolicyError
from ..gauge import GaugeVariant, as_variant

SCHEDULE_RULES = ("pow2", "lin")
# Terms summed explicitly before switching to the geometric majorant
_POW2_EXPLICIT_TERMS = 64


@dataclass(frozen=True)
class Schedule:
    """
    The sequence m_1 < m_2 < ...: rule pow2 (m_k = 2^k), rule lin (m_k = k),
    or an explicit finite list.
    """
    kind: str
    values: Tuple[float, ...] = ()

    def __post_init__(self):
        if self.kind == "list":
            vals = tuple(float(v) for v in self.values)
            if not vals:
                raise SchedulePolicyError("Explicit schedule must not be empty")
            if vals[0] < 1.0 or not all(math.isfinite(v) for v in vals):
                raise SchedulePolicyError(f"Schedule entries must be finite and >= 1, got {list(vals)}")
            if any(b <= a for a, b in zip(vals, vals[1:])):
                raise SchedulePolicyError(f"Schedule must be strictly increasing, got {list(vals)}")
            object.__setattr__(self, "values", vals)
        elif self.kind not in SCHEDULE_RULES:
            raise SchedulePolicyError(f"Unknown schedule {self.kind!r}")

    @classmethod
    def parse(cls, value: Any) -> "Schedule":
        if isinstance(value, Schedule):
            return value
        if isinstance(value, str):
            return cls(value)
        return cls("list", tuple(value))

    @property
    def length(self) -> Optional[int]:
        return len(self.values) if self.kind == "list" else None

    @property
    def summable(self) -> bool:
        return self.kind != "lin"

    def m(self, k: int) -> float:
        if k < 1:
            raise InvalidParameterError(f"Schedule index must be >= 1, got {k}")
        if self.kind == "pow2":
            return float(2 ** k)
        if self.kind == "lin":
            return float(k)
        return self.values[k - 1]

    def reciprocal_tail(self, K: int) -> float:
        """Upper bound on sum_{k > K} 1/(m_k + 1/m_k)"""
        if self.kind == "lin":
            return math.inf
        if self.kind == "list":
            return math.fsum(1.0 / (m + 1.0 / m) for m in self.values[K:])
        terms = [1.0 / (2.0 ** k + 2.0 ** -k) for k in range(K + 1, K + 1 + _POW2_EXPLICIT_TERMS)]
        return math.fsum(terms) + 2.0 ** -(K + _POW2_EXPLICIT_TERMS)

    def text(self) -> str:
        if self.kind == "list":
            return "[" + ", ".join(format_number(v) for v in self.values) + "]"
        return self.kind

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "values": list(self.values)} if self.kind == "list" else {"kind": self.kind}


def format_number(v: float) -> str:
    """Shortest text that parses back to v; integral values print without a fraction"""
    return str(int(v)) if float(v).is_integer() and abs(v) < 1e15 else repr(float(v))


@dataclass(frozen=True)
class Truncation:
    """Fixed number of components K, or a target tail bound eps"""
    kind: str
    value: float

    def __post_init__(self):
        if self.kind == "K":
            if int(self.value) != self.value or self.value < 0:
                raise InvalidParameterError(f"K must be a nonnegative integer, got {self.value}")
            object.__setattr__(self, "value", int(self.value))
        elif self.kind == "eps":
            if not self.value > 0:
                raise InvalidParameterError(f"eps must be positive, got {self.value}")
        else:
            raise InvalidParameterError(f"Unknown truncation {self.kind!r}")

    def text(self) -> str:
        return f"K={self.value}" if self.kind == "K" else f"eps={format_number(self.value)}"


@dataclass(frozen=True)
class DavisParams:
    """
    Diagonal space parameters: 1 < q < p, schedule, truncation, component variant.

    `truncation=None` means the configured default eps (or the whole list for
    explicit schedules).
    """
    q: float
    p: float
    schedule: Schedule = field(default_factory=lambda: Schedule(config.get("davis.schedule", "pow2")))
    truncation: Optional[Truncation] = None
    variant: GaugeVariant = GaugeVariant.GAUGE2
    normalize: bool = False
    j_norm_bound: Optional[float] = None

    def __post_init__(self):
        if not (1.0 < self.q < self.p and math.isfinite(self.p)):
            raise InvalidParameterError(f"Need 1 < q < p < inf, got q={self.q}, p={self.p}")
        object.__setattr__(self, "schedule", Schedule.parse(self.schedule))
        object.__setattr__(self, "variant", as_variant(self.variant))
        if self.effective_truncation.kind == "eps" and not self.schedule.summable:
            raise SchedulePolicyError(f"Schedule {self.schedule.text()} is not summable; "
                                      f"eps truncation needs sum 1/m_k < inf")

    @property
    def effective_truncation(self) -> Truncation:
        if self.truncation is not None:
            return self.truncation
        if self.schedule.kind == "list":
            return Truncation("K", len(self.schedule.values))
        return Truncation("eps", float(config.get("davis.eps", 1e-6)))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "q": self.q, "p": self.p, "schedule": self.schedule.to_dict(),
            "truncation": self.truncation.text() if self.truncation else None,
            "variant": self.variant.value, "normalize": self.normalize,
            "j_norm_bound": self.j_norm_bound,
        }
