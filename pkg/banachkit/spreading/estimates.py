"""
Finite-scale spreading-model estimates.

A spreading model value ||sum a_i e_i||_* is the limit of ||sum a_i x_{k_i}||
as n <= k_1 < ... < k_n move to infinity. We evaluate far-out sections on a
geometric shift grid and call the estimate stabilized only when the last three
grid values agree.
"""
import io
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Literal, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from ..config import config
from ..core import FVec
from ..errors import InvalidParameterError
from ..spaces import SBSpace, SpaceEvaluator, SpaceExpr, get_evaluator, meta_of, parse_space
from .generators import SequenceGenerator

logger = logging.getLogger(__name__)

ShiftLayout = Literal["block", "spread"]
Shift = Tuple[int, ...]


def shift_grid(n: int, base: Optional[int] = None, points: Optional[int] = None,
               layout: ShiftLayout = "block") -> List[Shift]:
    """
    Index tuples at K, 2K, 4K, ... with K = max(n, base).

    `block` uses consecutive indices (K_j, ..., K_j + n - 1); `spread` uses
    (K_j, 2 K_j, ..., n K_j).
    """
    if n < 1:
        raise InvalidParameterError(f"Need at least one coefficient, got n={n}")
    base = int(config.get("spreading.base_shift", 8)) if base is None else base
    points = int(config.get("spreading.grid_points", 3)) if points is None else points
    K = max(n, base)
    grid = []
    for j in range(points):
        K_j = K * 2 ** j
        if layout == "block":
            grid.append(tuple(range(K_j, K_j + n)))
        elif layout == "spread":
            grid.append(tuple(K_j * (i + 1) for i in range(n)))
        else:
            raise InvalidParameterError(f"Unknown shift layout {layout!r}")
    return grid


def check_shift(shift: Sequence[int], n: int) -> Shift:
    shift = tuple(int(k) for k in shift)
    if len(shift) != n:
        raise InvalidParameterError(f"Shift {shift} has {len(shift)} indices for {n} coefficients")
    if shift[0] < n or any(b <= a for a, b in zip(shift, shift[1:])):
        raise InvalidParameterError(f"Shift {shift} must be strictly increasing with k_1 >= {n}")
    return shift


@dataclass
class SmEstimate:
    coeffs: Tuple[float, ...]
    shifts: List[Shift]
    values: List[float]
    tol: float
    space: str = ""
    stabilized: bool = False
    delta_schedule: List[float] = field(default_factory=list)

    @property
    def value(self) -> float:
        return self.values[-1]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            "shift": [" ".join(str(k) for k in s) for s in self.shifts],
            "value": self.values,
            "delta": [math.nan] + self.delta_schedule,
        })

    def to_csv(self) -> str:
        buffer = io.StringIO()
        self.to_frame().to_csv(buffer, index=False, float_format="%.17g")
        return buffer.getvalue()

    def to_dict(self) -> Dict[str, Any]:
        return {
            "space": self.space,
            "coeffs": list(self.coeffs),
            "shifts": [list(s) for s in self.shifts],
            "values": self.values,
            "delta_schedule": self.delta_schedule,
            "stabilized": self.stabilized,
            "value": self.value,
            "tol": self.tol,
        }


def _stabilized(values: Sequence[float], tol: float) -> bool:
    if len(values) < 3:
        return False
    tail = values[-3:]
    return all(abs(a - b) < tol or a == b for i, a in enumerate(tail) for b in tail[i + 1:])


def sm_estimate(gen: SequenceGenerator, coeffs: Sequence[float], shifts: Optional[Sequence[Sequence[int]]] = None,
                tol: Optional[float] = None, evaluator: Optional[SpaceEvaluator] = None,
                max_workers: Optional[int] = None) -> SmEstimate:
    """
    Evaluate ||sum a_i x_{k_i}|| over a grid of shifts.

    Grid evaluations run concurrently; values keep the order of `shifts`.
    """
    coeffs = tuple(float(a) for a in coeffs)
    n = len(coeffs)
    shifts = [check_shift(s, n) for s in (shifts if shifts is not None else shift_grid(n))]
    if not shifts:
        raise InvalidParameterError("Shift grid is empty")
    tol = float(config.get("spreading.stabilization_tol", 1e-9)) if tol is None else tol
    evaluator = evaluator or get_evaluator()
    expr = parse_space(gen.space)
    max_workers = max_workers or int(config.get("spreading.max_workers", 4))

    def evaluate(shift: Shift) -> float:
        return evaluator.value(expr, gen.section(coeffs, shift))

    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        values = list(pool.map(evaluate, shifts))

    estimate = SmEstimate(coeffs=coeffs, shifts=shifts, values=values, tol=tol, space=gen.space,
                          stabilized=_stabilized(values, tol),
                          delta_schedule=[abs(b - a) for a, b in zip(values, values[1:])])
    if not estimate.stabilized:
        logger.warning(f"Estimate did not stabilize on {len(shifts)} shifts "
                       f"(last deltas {estimate.delta_schedule[-2:]})")
    return estimate


def sm_exact_schreier(space: Any, coeffs: Sequence[float], evaluator: Optional[SpaceEvaluator] = None) -> float:
    """
    Spreading-model value of the unit vector basis of SB(X, r).

    Far-out sections of the SB basis are Schreier admissible, where the SB norm
    equals the norm of X; X symmetric with lower estimate <= r makes the value
    independent of the placement.
    """
    expr: SpaceExpr = parse_space(space) if isinstance(space, str) else space
    if not isinstance(expr, SBSpace):
        raise InvalidParameterError(f"Expected an sb(...) space, got {expr.kind}")
    child = meta_of(expr.child)
    if not child.symmetric or child.lower_estimate_r is None or child.lower_estimate_r > expr.r:
        raise InvalidParameterError(
            "Exact SB spreading values need a symmetric base space with lower estimate <= r")
    evaluator = evaluator or get_evaluator()
    return evaluator.value(expr.child, FVec.from_dense(coeffs))


@dataclass
class CesaroReport:
    sizes: List[int]
    values: List[float]

    @property
    def non_increasing(self) -> bool:
        return all(b <= a for a, b in zip(self.values, self.values[1:]))

    def to_dict(self) -> Dict[str, Any]:
        return {"sizes": self.sizes, "values": self.values, "non_increasing": self.non_increasing,
                "last": self.values[-1] if self.values else None}


def cesaro_diagnostic(gen: SequenceGenerator, horizon: int, sizes: Optional[Sequence[int]] = None,
                      evaluator: Optional[SpaceEvaluator] = None) -> CesaroReport:
    """||(1/|F|) sum_{i in F} x_i|| for F = {1, ..., s}; descriptive only"""
    if horizon < 1:
        raise InvalidParameterError(f"horizon must be >= 1, got {horizon}")
    sizes = list(sizes) if sizes is not None else list(range(1, horizon + 1))
    evaluator = evaluator or get_evaluator()
    expr = parse_space(gen.space)
    values = []
    for s in sizes:
        avg = gen.section(np.full(s, 1.0 / s), range(1, s + 1))
        values.append(evaluator.value(expr, avg))
    return CesaroReport(sizes=sizes, values=values)
