"""
Norm of the diagonal symmetric space built over a base space X.

The diagonal element x~ = (x, x, ...) is normed by placing the component
gauges g_k = |||x|||_{q,p}^{m_k} on the first basis vectors of X:

    ||x~||_D = || sum_k g_k b_k ||_X.

Omitted components are bounded with ||x||_{q,p}^m <= ||x||_q / (m + 1/m),
the sqrt(2) comparison between the two gauge variants and the triangle
inequality in X.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional

import numpy as np

from ..config import config
from ..core import FVec, NormHandle, Vector, as_fvec, lp_norm
from ..errors import InvalidParameterError, SchedulePolicyError
from ..gauge import GaugeParams, GaugeVariant, compute_gauge
from .params import DavisParams, Truncation

logger = logging.getLogger(__name__)


@dataclass
class DavisResult:
    value: float
    tail_bound: float
    K_used: int
    components: List[float] = field(default_factory=list)
    raw_value: float = 0.0
    basis_norm: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "value": self.value,
            "tail_bound": self.tail_bound,
            "K_used": self.K_used,
            "components": self.components,
            "raw_value": self.raw_value,
            "basis_norm": self.basis_norm,
        }


def _variant_factor(params: DavisParams) -> float:
    return math.sqrt(2.0) if params.variant is GaugeVariant.GAUGE2 else 1.0


def tail_bound(x: Vector, params: DavisParams, K: int, basis_bound: float = 1.0) -> float:
    """
    Certified bound on the outer-norm contribution of components k > K.

    Infinite for non-summable schedules; zero once an explicit list is exhausted.
    """
    if K < 0:
        raise InvalidParameterError(f"K must be nonnegative, got {K}")
    norm_q = lp_norm(x, params.q)
    if norm_q == 0.0:
        return 0.0
    reciprocal = params.schedule.reciprocal_tail(K)
    if math.isinf(reciprocal):
        return math.inf
    return _variant_factor(params) * norm_q * reciprocal * basis_bound


def components_needed(x: Vector, params: DavisParams, basis_bound: float = 1.0) -> int:
    """Number of components K the truncation policy asks for"""
    truncation = params.effective_truncation
    length = params.schedule.length
    if truncation.kind == "K":
        K = int(truncation.value)
        if length is not None and K > length:
            raise SchedulePolicyError(f"K={K} exceeds the explicit schedule length {length}")
        return K

    if not params.schedule.summable:
        raise SchedulePolicyError(f"Schedule {params.schedule.text()} is not summable; eps mode is unavailable")
    limit = length if length is not None else int(config.get("davis.max_components", 200))
    for K in range(0, limit + 1):
        if tail_bound(x, params, K, basis_bound) <= truncation.value:
            return K
    if length is not None:
        return length
    raise SchedulePolicyError(f"Tail bound did not reach eps={truncation.value} within {limit} components")


def davis_components(x: Vector, params: DavisParams, K: int) -> List[float]:
    return [compute_gauge(x, GaugeParams(params.q, params.p, params.schedule.m(k)), params.variant).value
            for k in range(1, K + 1)]


def _raw_norm(x: Vector, outer: NormHandle, params: DavisParams) -> DavisResult:
    K = components_needed(x, params, outer.basis_bound)
    if K == 0 or (isinstance(x, FVec) and x.is_zero()):
        return DavisResult(value=0.0, tail_bound=tail_bound(x, params, 0, outer.basis_bound), K_used=0)
    components = davis_components(x, params, K)
    value = outer.norm(FVec.from_dense(components))
    return DavisResult(value=value, tail_bound=tail_bound(x, params, K, outer.basis_bound),
                       K_used=K, components=components, raw_value=value)


def davis_norm(x: Vector, outer: NormHandle, params: DavisParams) -> DavisResult:
    """
    ||x~||_D with certified truncation.

    With `normalize`, value and tail bound are divided by ||e~_1||_D computed
    under the same truncation policy.
    """
    if isinstance(x, FVec) and x.is_zero():
        return DavisResult(value=0.0, tail_bound=0.0, K_used=0)
    result = _raw_norm(x, outer, params)
    logger.debug(f"davis K={result.K_used} value={result.value:.10g} tail<={result.tail_bound:.3g}")
    if params.normalize:
        e1 = _raw_norm(FVec.unit(1), outer, params).value
        result.basis_norm = e1
        result.value /= e1
        result.tail_bound /= e1
    return result


def j_map(x_diag: Vector) -> FVec:
    """Coefficients of sum a_i e~_i read as sum a_i e_i in l_p"""
    return as_fvec(x_diag)


@dataclass
class JConstantReport:
    samples: int
    max_ratio: float
    min_ratio: float
    p: float

    def to_dict(self) -> Dict[str, Any]:
        return {"samples": self.samples, "max_ratio": self.max_ratio,
                "min_ratio": self.min_ratio, "p": self.p}


def estimate_j_constant(outer: NormHandle, params: DavisParams, samples: Optional[Iterable[FVec]] = None,
                        n_samples: int = 30, max_support: int = 6, seed: int = 0) -> JConstantReport:
    """Observed range of ||j(x)||_p / ||x||_D over a sample; never asserted against a bound"""
    if samples is None:
        rng = np.random.default_rng(seed)
        samples = [FVec.from_dense(rng.uniform(-1.0, 1.0, size=int(rng.integers(1, max_support + 1))))
                   for _ in range(n_samples)]
    ratios = []
    for x in samples:
        d = davis_norm(x, outer, params).value
        if d > 0.0:
            ratios.append(lp_norm(j_map(x), params.p) / d)
    if not ratios:
        raise InvalidParameterError("No nonzero samples for the j-constant sweep")
    return JConstantReport(samples=len(ratios), max_ratio=max(ratios), min_ratio=min(ratios), p=params.p)
