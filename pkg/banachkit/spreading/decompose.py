"""
Splitting a normalized block sequence into a part converging coordinatewise
after rearrangement and a part with vanishing sup norm.

For each n the vector x_n is split at the threshold delta_n: entries of
modulus >= delta_n form y_n, the rest z_n. The profile lambda is read from the
non-increasing rearrangements of the y_n over a trailing window, which must be
Cauchy to the configured tolerance.
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..config import config
from ..core import FVec, lp_norm, rearrange_dec, threshold_split
from ..errors import InvalidParameterError
from ..spaces import meta_of, parse_space
from .generators import SequenceGenerator

logger = logging.getLogger(__name__)

MIN_HORIZON = 10


@dataclass
class Profile:
    """Non-increasing nonnegative profile with the diagnostics it was read from"""
    values: Tuple[float, ...]
    residuals: List[float] = field(default_factory=list)
    m_delta: Dict[float, int] = field(default_factory=dict)
    truncated: bool = False
    tail_mass: Optional[float] = None

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if any(v < 0 for v in vals) or any(b > a for a, b in zip(vals, vals[1:])):
            raise InvalidParameterError(f"Profile must be non-negative and non-increasing, got {list(vals)}")
        self.values = vals

    def __len__(self) -> int:
        return len(self.values)

    def is_zero(self) -> bool:
        return not any(self.values)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "lambda": list(self.values),
            "residuals": self.residuals,
            "m_delta": {repr(k): v for k, v in self.m_delta.items()},
            "truncated": self.truncated,
            "tail_mass": self.tail_mass,
        }


@dataclass
class Split:
    n: int
    delta: float
    x: FVec
    y: FVec
    z: FVec


@dataclass
class Decomposition:
    profile: Profile
    splits: List[Split]
    status: str
    reason: str = ""
    window_spread: float = 0.0

    @property
    def residuals_non_increasing(self) -> bool:
        r = self.profile.residuals
        return all(b <= a for a, b in zip(r, r[1:]))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "status": self.status,
            "reason": self.reason,
            "window_spread": self.window_spread,
            "profile": self.profile.to_dict(),
            "splits": [{"n": s.n, "delta": s.delta, "y": s.y.to_dict(), "z_sup": s.z.sup_norm()}
                       for s in self.splits],
        }


def _check_deltas(deltas: Sequence[float]) -> List[float]:
    deltas = [float(d) for d in deltas]
    if not deltas or any(d <= 0 for d in deltas):
        raise InvalidParameterError("delta schedule must be a non-empty list of positive reals")
    if any(b > a for a, b in zip(deltas, deltas[1:])):
        raise InvalidParameterError("delta schedule must be non-increasing")
    return deltas


def _padded(rows: List[np.ndarray]) -> np.ndarray:
    width = max((r.size for r in rows), default=0)
    out = np.zeros((len(rows), width))
    for i, r in enumerate(rows):
        out[i, :r.size] = r
    return out


def decompose(gen: SequenceGenerator, deltas: Sequence[float], horizon: int,
              window: Optional[int] = None, cauchy_tol: Optional[float] = None) -> Decomposition:
    """
    Split x_1..x_N at the delta schedule (the last entry repeats) and estimate the profile.

    Status is `ok` when the rearranged large parts agree within `cauchy_tol`
    over the last `window` indices, otherwise `inconclusive`; the horizon is
    never extended.
    """
    deltas = _check_deltas(deltas)
    window = int(config.get("spreading.cauchy_window", 5)) if window is None else window
    cauchy_tol = float(config.get("spreading.cauchy_tol", 1e-6)) if cauchy_tol is None else cauchy_tol
    if horizon < 1 or window < 2:
        raise InvalidParameterError(f"Need horizon >= 1 and window >= 2, got {horizon}, {window}")

    splits: List[Split] = []
    rearranged: List[np.ndarray] = []
    for n in range(1, horizon + 1):
        x = gen(n)
        delta = deltas[min(n, len(deltas)) - 1]
        y, z = threshold_split(x, delta)
        splits.append(Split(n=n, delta=delta, x=x, y=y, z=z))
        rearranged.append(rearrange_dec(y).values.copy())

    tail = _padded(rearranged[-window:])
    spread = float(np.max(np.abs(tail - tail[-1]))) if tail.size else 0.0
    if horizon < max(MIN_HORIZON, window):
        status, reason = "inconclusive", f"horizon {horizon} too small for a Cauchy window of {window}"
    elif spread >= cauchy_tol:
        status, reason = "inconclusive", f"rearranged parts spread {spread:.3g} over the last {window} terms"
    else:
        status, reason = "ok", ""

    last = splits[-1]
    truncated = not last.z.is_zero()
    lower_r = meta_of(parse_space(gen.space)).lower_estimate_r if gen.space else None
    # rows are non-increasing, so the per-coordinate median is too
    values = np.trim_zeros(np.median(tail, axis=0), "b") if tail.size else np.zeros(0)
    recent = splits[-window:]
    m_delta = {
        d: int(np.percentile([np.count_nonzero(np.abs(s.x.values) >= d) for s in recent], 50, method="lower"))
        for d in sorted(set(deltas))
    }
    profile = Profile(
        values=tuple(float(v) for v in values),
        residuals=[s.z.sup_norm() for s in splits],
        m_delta=m_delta,
        truncated=truncated,
        tail_mass=lp_norm(last.z, lower_r) if truncated and lower_r is not None else None,
    )
    if status != "ok":
        logger.warning(f"Decomposition inconclusive: {reason}")
    return Decomposition(profile=profile, splits=splits, status=status, reason=reason, window_spread=spread)
