"""
The iterated chain X_1, X_2, ... of diagonal spaces over Schreier-Baernstein spaces.

Level k is X_k = davis(sb(X_{k-1}, r=r_k), q=s_k, p=t_k, m=schedule) with
X_0 = E. Parameter choices are exact rationals so the strict inequalities
between levels are checked without rounding:

    r_1 > q_0,   r_{k+1} > max(r_k, q_k),   1 < s_{k+1} < t_{k+1} < p_k.

q_k and p_k are not computable for the diagonal spaces; they are replaced by
labelled proxies: q_k by the lower estimate r_k of the SB layer, p_k by a
configured convexity value (default s_k).
"""
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from ..config import config
from ..davis import DavisParams, Schedule, Truncation
from ..errors import InvalidParameterError
from .expr import DavisSpace, LpSpace, SBSpace, SpaceExpr
from .grammar import as_space, format_space

logger = logging.getLogger(__name__)

Rational = Union[Fraction, int, float, str]


def as_fraction(value: Rational) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        if not math.isfinite(value):
            raise InvalidParameterError(f"Chain parameters must be finite, got {value}")
        return Fraction(repr(value))
    return Fraction(value)


@dataclass(frozen=True)
class ChainPolicy:
    r_step: Fraction = field(default_factory=lambda: as_fraction(config.get("chain.r_step", "1")))
    s_fraction: Fraction = field(default_factory=lambda: as_fraction(config.get("chain.s_fraction", "1/3")))
    t_fraction: Fraction = field(default_factory=lambda: as_fraction(config.get("chain.t_fraction", "2/3")))
    schedule: str = field(default_factory=lambda: config.get("chain.schedule", "pow2"))
    truncation_K: int = field(default_factory=lambda: int(config.get("chain.truncation_K", 6)))
    p_proxies: Optional[Sequence[Rational]] = None

    def __post_init__(self):
        for name in ("r_step", "s_fraction", "t_fraction"):
            object.__setattr__(self, name, as_fraction(getattr(self, name)))
        if self.r_step <= 0:
            raise InvalidParameterError(f"r_step must be positive, got {self.r_step}")
        if not 0 < self.s_fraction < self.t_fraction < 1:
            raise InvalidParameterError(
                f"Need 0 < s_fraction < t_fraction < 1, got {self.s_fraction}, {self.t_fraction}")
        if self.p_proxies is not None:
            object.__setattr__(self, "p_proxies", tuple(as_fraction(v) for v in self.p_proxies))

    def p_proxy(self, k: int, s_k: Fraction) -> Tuple[Fraction, str]:
        """Convexity proxy p_k for level k >= 1, with its label"""
        if self.p_proxies is not None and k <= len(self.p_proxies):
            return self.p_proxies[k - 1], "configured"
        return s_k, f"default:s_{k}"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "r_step": str(self.r_step),
            "s_fraction": str(self.s_fraction),
            "t_fraction": str(self.t_fraction),
            "schedule": self.schedule,
            "truncation_K": self.truncation_K,
            "p_proxies": [str(v) for v in self.p_proxies] if self.p_proxies is not None else None,
        }


@dataclass
class ChainLevel:
    k: int
    r: Fraction
    s: Fraction
    t: Fraction
    q_prev: Fraction
    q_prev_label: str
    p_prev: Fraction
    p_prev_label: str
    expr: SpaceExpr

    @property
    def text(self) -> str:
        return format_space(self.expr)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "k": self.k,
            "r": str(self.r),
            "s": str(self.s),
            "t": str(self.t),
            "q_proxy": {"value": str(self.q_prev), "label": self.q_prev_label},
            "p_proxy": {"value": str(self.p_prev), "label": self.p_prev_label},
            "schedule": self.expr.params.schedule.text(),
            "space": self.text,
        }


@dataclass
class ChainDescriptor:
    p0: Fraction
    q0: Fraction
    base: SpaceExpr
    policy: ChainPolicy
    levels: List[ChainLevel] = field(default_factory=list)

    def space(self, k: int) -> SpaceExpr:
        if k == 0:
            return self.base
        return self.levels[k - 1].expr

    @property
    def top(self) -> SpaceExpr:
        return self.space(len(self.levels))

    def inequalities(self) -> List[Dict[str, Any]]:
        """Every strict inequality of the construction, evaluated exactly"""
        rows = []
        for level in self.levels:
            k = level.k
            bound = self.q0 if k == 1 else max(self.levels[k - 2].r, level.q_prev)
            rows.append({"level": k, "claim": f"r_{k} > {'q_0' if k == 1 else f'max(r_{k - 1}, q_{k - 1})'}",
                         "lhs": str(level.r), "rhs": str(bound), "holds": level.r > bound})
            rows.append({"level": k, "claim": f"1 < s_{k} < t_{k} < p_{k - 1}",
                         "lhs": f"{level.s} < {level.t}", "rhs": str(level.p_prev),
                         "holds": 1 < level.s < level.t < level.p_prev})
        return rows

    def to_dict(self) -> Dict[str, Any]:
        return {
            "base": {"p0": str(self.p0), "q0": str(self.q0), "space": format_space(self.base)},
            "policy": self.policy.to_dict(),
            "levels": [level.to_dict() for level in self.levels],
            "inequalities": self.inequalities(),
        }


def build_chain(p0: Rational, q0: Rational, k: int, policy: Optional[ChainPolicy] = None,
                base: Optional[Union[str, SpaceExpr]] = None) -> ChainDescriptor:
    """
    Descriptor for X_1, ..., X_k over a base space that is p0-convex and q0-concave.

    Without `base`, E = lp(p0), which needs p0 == q0.
    """
    if isinstance(k, bool) or not isinstance(k, int) or k < 1:
        raise InvalidParameterError(f"Chain length k must be a positive integer, got {k}")
    p0, q0 = as_fraction(p0), as_fraction(q0)
    if not 1 < p0 <= q0:
        raise InvalidParameterError(f"Need 1 < p0 <= q0 < inf, got p0={p0}, q0={q0}")
    if base is None:
        if p0 != q0:
            raise InvalidParameterError("A base space expression is required when p0 != q0")
        base = LpSpace(float(p0))
    base = as_space(base)
    policy = policy or ChainPolicy()

    desc = ChainDescriptor(p0=p0, q0=q0, base=base, policy=policy)
    space = base
    r_prev, q_prev, p_prev = None, q0, p0
    q_label, p_label = "base:q0", "base:p0"
    for level in range(1, k + 1):
        r = q0 + policy.r_step if r_prev is None else max(r_prev, q_prev) + policy.r_step
        s = 1 + (p_prev - 1) * policy.s_fraction
        t = 1 + (p_prev - 1) * policy.t_fraction
        params = DavisParams(float(s), float(t), Schedule(policy.schedule), Truncation("K", policy.truncation_K))
        space = DavisSpace(SBSpace(space, float(r)), params)
        desc.levels.append(ChainLevel(k=level, r=r, s=s, t=t, q_prev=q_prev, q_prev_label=q_label,
                                      p_prev=p_prev, p_prev_label=p_label, expr=space))
        logger.debug(f"chain level {level}: r={r} s={s} t={t}")

        r_prev = r
        q_prev, q_label = r, f"lower_estimate(r_{level})"
        p_prev, p_label = policy.p_proxy(level, s)

    failed = [row for row in desc.inequalities() if not row["holds"]]
    if failed:
        raise InvalidParameterError(f"Chain policy violates {failed[0]['claim']} at level {failed[0]['level']}")
    return desc
