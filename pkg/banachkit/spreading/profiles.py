"""
Norms of the symmetric sequences induced by profiles, their equivalence
constants, and the absorption experiment for planted sequences.
"""
import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, Optional, Sequence, Tuple, Union

import numpy as np

from ..core import FVec
from ..errors import InvalidParameterError
from ..spaces import SBSpace, SpaceEvaluator, SpaceExpr, get_evaluator, meta_of, parse_space
from .decompose import Profile
from .estimates import SmEstimate, sm_estimate
from .generators import SequenceGenerator

logger = logging.getLogger(__name__)

ProfileLike = Union[Profile, Sequence[float]]
SpaceLike = Union[str, SpaceExpr]


def _as_profile(profile: ProfileLike) -> Profile:
    return profile if isinstance(profile, Profile) else Profile(tuple(profile))


def _as_expr(space: SpaceLike) -> SpaceExpr:
    return parse_space(space) if isinstance(space, str) else space


def profile_vector(profile: ProfileLike, coeffs: Sequence[float], start: int = 1,
                   gaps: Optional[Sequence[int]] = None) -> FVec:
    """
    sum_k a_k u_k with u_k a copy of the profile on the k-th of consecutive
    disjoint blocks; `gaps` inserts extra empty positions before each block.
    """
    lam = _as_profile(profile).values
    entries: Dict[int, float] = {}
    pos = start
    for k, a in enumerate(coeffs):
        pos += gaps[k] if gaps is not None else 0
        for i, v in enumerate(lam):
            entries[pos + i] = float(a) * v
        pos += len(lam)
    return FVec(entries)


def profile_norm(profile: ProfileLike, coeffs: Sequence[float], space: SpaceLike,
                 evaluator: Optional[SpaceEvaluator] = None) -> float:
    """||sum a_k u_k|| in a symmetric space; placement of the disjoint copies is irrelevant there"""
    profile = _as_profile(profile)
    expr = _as_expr(space)
    if not meta_of(expr).symmetric:
        raise InvalidParameterError(f"profile_norm needs a symmetric space, got {expr.kind}")
    if profile.truncated:
        logger.warning(f"Profile was truncated at the horizon (tail mass {profile.tail_mass})")
    evaluator = evaluator or get_evaluator()
    return evaluator.value(expr, profile_vector(profile, coeffs))


def equiv_constants(profile_a: ProfileLike, profile_b: ProfileLike, space_a: SpaceLike, space_b: SpaceLike,
                    n: int, sample: Optional[Sequence[Sequence[float]]] = None, n_samples: int = 50,
                    seed: int = 0, evaluator: Optional[SpaceEvaluator] = None) -> Tuple[float, float]:
    """
    Observed (c_low, c_high) with c_low ||sum a u^B|| <= ||sum a u^A|| <= c_high ||sum a u^B||.

    The default sample is uniform on [-1, 1]^n.
    """
    if n < 1:
        raise InvalidParameterError(f"n must be >= 1, got {n}")
    profile_a, profile_b = _as_profile(profile_a), _as_profile(profile_b)
    if profile_a.is_zero() or profile_b.is_zero():
        raise InvalidParameterError("Degenerate profile: all entries are zero")
    if sample is None:
        sample = np.random.default_rng(seed).uniform(-1.0, 1.0, size=(n_samples, n))

    ratios = []
    for coeffs in sample:
        if len(coeffs) != n:
            raise InvalidParameterError(f"Sample vector {list(coeffs)} is not of length {n}")
        a = profile_norm(profile_a, coeffs, space_a, evaluator)
        b = profile_norm(profile_b, coeffs, space_b, evaluator)
        if a > 0.0 and b > 0.0:
            ratios.append(a / b)
    if not ratios:
        raise InvalidParameterError("Sample has no coefficient vector with nonzero norms")
    return min(ratios), max(ratios)


def _symmetric_part(expr: SpaceExpr) -> SpaceExpr:
    """The space far-out sections are normed in: itself if symmetric, X for SB(X, r) with X symmetric"""
    if meta_of(expr).symmetric:
        return expr
    if isinstance(expr, SBSpace) and meta_of(expr.child).symmetric:
        return expr.child
    raise InvalidParameterError(f"No symmetric space to norm profile sections of {expr.kind}")


@dataclass
class AbsorptionReport:
    estimate: SmEstimate
    lower: float
    constant: float

    @property
    def contained(self) -> bool:
        return (self.estimate.value >= self.lower * (1.0 - 1e-9)
                and math.isfinite(self.constant))

    def to_dict(self) -> Dict[str, Any]:
        return {"sm_value": self.estimate.value, "profile_norm": self.lower, "constant": self.constant,
                "stabilized": self.estimate.stabilized, "contained": self.contained}


def absorption_check(gen: SequenceGenerator, profile: ProfileLike, coeffs: Sequence[float],
                     shifts: Optional[Sequence[Sequence[int]]] = None,
                     evaluator: Optional[SpaceEvaluator] = None) -> AbsorptionReport:
    """
    Compare the spreading estimate of x_n = y_n + z_n with the profile norm of y.

    The estimate should sit in [profile_norm, C * profile_norm]; C is observed,
    not asserted.
    """
    evaluator = evaluator or get_evaluator()
    estimate = sm_estimate(gen, coeffs, shifts=shifts, evaluator=evaluator)
    lower = profile_norm(profile, coeffs, _symmetric_part(parse_space(gen.space)), evaluator)
    constant = estimate.value / lower if lower > 0 else math.inf
    report = AbsorptionReport(estimate=estimate, lower=lower, constant=constant)
    if not report.contained:
        logger.warning(f"Absorption containment failed: sm={estimate.value:.10g} profile={lower:.10g}")
    return report
