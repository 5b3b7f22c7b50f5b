"""
Parameter and result types for the interpolation gauges.
"""
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Union

from ..core import FVec, FlatVec
from ..errors import InvalidParameterError


class GaugeVariant(Enum):
    """Which functional of the decomposition is minimized"""
    GAUGE = "gauge"      # max(||y||_q, ||z||_p)
    GAUGE2 = "gauge2"    # (||y||_q^2 + ||z||_p^2)^(1/2)


@dataclass(frozen=True)
class GaugeParams:
    """Exponents 1 <= q < p < inf and interpolation index m >= 1"""
    q: float
    p: float
    m: float

    def __post_init__(self):
        for name in ("q", "p", "m"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidParameterError(f"{name} must be finite")
        if not 1.0 <= self.q < self.p:
            raise InvalidParameterError(f"Need 1 <= q < p, got q={self.q}, p={self.p}")
        if self.m < 1.0:
            raise InvalidParameterError(f"Need m >= 1, got m={self.m}")

    def with_m(self, m: float) -> "GaugeParams":
        return GaugeParams(self.q, self.p, m)

    def to_dict(self) -> Dict[str, float]:
        return {"q": self.q, "p": self.p, "m": self.m}


@dataclass
class GaugeResult:
    """
    Gauge value with a witnessing decomposition x = m*y + (1/m)*z.

    For the gauge variant the two witness norms bracket the true value and
    `gap` is their difference; `value` is the larger one (an upper bound).
    """
    value: float
    y: Union[FVec, FlatVec]
    z: Union[FVec, FlatVec]
    variant: GaugeVariant
    residual_certificate: float = 0.0
    gap: float = 0.0
    method: str = "solver"
    evaluations: int = 0
    diagnostics: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "value": self.value,
            "variant": self.variant.value,
            "y": self.y.to_dict(),
            "z": self.z.to_dict(),
            "residual_certificate": self.residual_certificate,
            "gap": self.gap,
            "method": self.method,
            "evaluations": self.evaluations,
        }


def as_variant(variant: Union[str, GaugeVariant]) -> GaugeVariant:
    try:
        return variant if isinstance(variant, GaugeVariant) else GaugeVariant(variant)
    except ValueError:
        raise InvalidParameterError(f"Unknown gauge variant: {variant!r}")


def check_tol(tol: float) -> float:
    if not 0.0 < tol <= 1e-2:
        raise InvalidParameterError(f"tol must lie in (0, 1e-2], got {tol}")
    return float(tol)
