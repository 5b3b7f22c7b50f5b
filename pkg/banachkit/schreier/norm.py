"""
Schreier-Baernstein norms

    ||x||_SB(X,r) = sup { (sum_j ||F_j x||_X^r)^(1/r) : F_1 < ... disjoint, F_j in S }.

For a monotone 1-unconditional base norm the supremum is attained on a
partition of supp x: uncovered coordinates can join as singletons, and the
supremum over subsets of any admissible set is reached by the set itself.
The exact search is therefore a memoized recursion over the remaining support,
branching on the admissible set that holds the smallest remaining index, with
branch-and-bound against an upper envelope derived from the base norm's
p-convexity.
"""
import logging
import math
from dataclasses import dataclass
from itertools import combinations
from typing import Any, Callable, Dict, List, Optional, Tuple

from ..config import config
from ..core import FVec, NormHandle, restrict
from ..errors import InvalidParameterError
from .family import (
    IndexSet, SchreierPartition, admissible_partitions, blocks_with_minimum, check_cap, is_schreier,
)

logger = logging.getLogger(__name__)

SB_MODES = ("exact", "heuristic", "auto")
_PRUNE_SLACK = 1e-9


@dataclass
class SbResult:
    value: float
    partition: SchreierPartition
    exact: bool
    evaluations: int = 0
    strategy: str = "exact"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "value": self.value,
            "partition": self.partition.to_dict(),
            "exact": self.exact,
            "evaluations": self.evaluations,
            "strategy": self.strategy,
        }


def _check_r(r: float) -> float:
    if not (r >= 1.0 and math.isfinite(r)):
        raise InvalidParameterError(f"r must be a finite real >= 1, got {r}")
    return float(r)


class _SetNorms:
    """Per-call memo of ||F x||_X^r over index sets"""

    def __init__(self, x: FVec, X: NormHandle, r: float):
        self.x = x
        self.X = X
        self.r = r
        self._powers: Dict[IndexSet, float] = {}

    def __call__(self, F: IndexSet) -> float:
        if F not in self._powers:
            self._powers[F] = self.X.norm(restrict(self.x, F)) ** self.r
        return self._powers[F]

    @property
    def evaluations(self) -> int:
        return len(self._powers)


def partition_value(x: FVec, partition: SchreierPartition, X: NormHandle, r: float) -> float:
    """(sum_j ||F_j x||_X^r)^(1/r), summed exactly so the result is order independent"""
    r = _check_r(r)
    terms = [X.norm(restrict(x, F)) ** r for F in partition.sets]
    return math.fsum(terms) ** (1.0 / r)


def _envelope(x: FVec, X: NormHandle, r: float) -> Callable[[IndexSet], float]:
    """Upper bound on sum_j ||F_j x||^r over admissible partitions of a remainder"""
    p = X.p_convex if X.p_convex is not None and math.isfinite(X.p_convex) and X.p_convex <= r else 1.0
    weights = {i: (abs(v) * X.unit_norm(i)) ** p for i, v in x.items()}

    def bound(rem: IndexSet) -> float:
        return math.fsum(weights[i] for i in rem) ** (r / p)
    return bound


def _exact(x: FVec, X: NormHandle, r: float, cap: Optional[int]) -> SbResult:
    support = x.support()
    check_cap(len(support), cap)
    set_norm = _SetNorms(x, X, r)
    envelope = _envelope(x, X, r)
    memo: Dict[IndexSet, Tuple[float, List[IndexSet]]] = {}
    pruned = 0

    def best(rem: IndexSet) -> Tuple[float, List[IndexSet]]:
        nonlocal pruned
        if not rem:
            return 0.0, []
        if rem in memo:
            return memo[rem]
        top, top_sets = -1.0, []
        for block, remaining in blocks_with_minimum(rem):
            if top >= 0.0 and envelope(block) + envelope(remaining) <= top * (1.0 - _PRUNE_SLACK):
                pruned += 1
                continue
            tail, tail_sets = best(remaining)
            candidate = set_norm(block) + tail
            if candidate > top:
                top, top_sets = candidate, [block] + tail_sets
        memo[rem] = (top, top_sets)
        return memo[rem]

    _, sets = best(tuple(support))
    partition = SchreierPartition(tuple(sets))
    logger.debug(f"exact SB search: |supp|={len(support)} states={len(memo)} "
                 f"base evaluations={set_norm.evaluations} pruned={pruned}")
    return SbResult(value=partition_value(x, partition, X, r), partition=partition, exact=True,
                    evaluations=set_norm.evaluations, strategy="exact")


def _ascending_chunks(support: IndexSet) -> List[IndexSet]:
    sets, k = [], 0
    while k < len(support):
        i0 = support[k]
        sets.append(tuple(support[k:k + i0]))
        k += i0
    return sets


def _greedy_descending(x: FVec, set_norm: _SetNorms) -> List[IndexSet]:
    """Place coordinates by decreasing modulus into the admissible set they improve most"""
    order = sorted(x.support(), key=lambda i: (-abs(x.get(i)), i))
    sets: List[IndexSet] = []
    for i in order:
        best_gain, best_k = set_norm((i,)), None
        for k, F in enumerate(sets):
            grown = tuple(sorted(F + (i,)))
            if is_schreier(grown):
                gain = set_norm(grown) - set_norm(F)
                if gain > best_gain:
                    best_gain, best_k = gain, k
        if best_k is None:
            sets.append((i,))
        else:
            sets[best_k] = tuple(sorted(sets[best_k] + (i,)))
    return sets


def _heuristic(x: FVec, X: NormHandle, r: float) -> SbResult:
    support = x.support()
    set_norm = _SetNorms(x, X, r)
    candidates = {
        "singletons": [(i,) for i in support],
        "ascending": _ascending_chunks(support),
        "greedy": _greedy_descending(x, set_norm),
    }
    strategy, sets = max(candidates.items(), key=lambda kv: math.fsum(set_norm(F) for F in kv[1]))
    partition = SchreierPartition(tuple(sets))
    return SbResult(value=partition_value(x, partition, X, r), partition=partition, exact=False,
                    evaluations=set_norm.evaluations, strategy=f"heuristic:{strategy}")


def sb_norm(x: FVec, X: NormHandle, r: float, mode: Optional[str] = None,
            cap: Optional[int] = None) -> SbResult:
    """
    SB(X, r) norm of x.

    `exact` searches every admissible partition of the support (bounded by the
    exhaustive cap); `heuristic` returns the best of a few greedy families as a
    certified lower bound; `auto` uses exact search within the cap.
    """
    r = _check_r(r)
    mode = mode or config.schreier_mode
    if mode not in SB_MODES:
        raise InvalidParameterError(f"Unknown SB mode {mode!r}; expected one of {SB_MODES}")
    if x.is_zero():
        return SbResult(value=0.0, partition=SchreierPartition(), exact=True, strategy="trivial")

    if mode == "auto":
        cap_value = config.exhaustive_cap if cap is None else cap
        if len(x) > cap_value:
            logger.warning(f"Support {len(x)} beyond exhaustive cap {cap_value}; using heuristic SB norm")
            mode = "heuristic"
        else:
            mode = "exact"
    return _exact(x, X, r, cap) if mode == "exact" else _heuristic(x, X, r)


def sb_norm_oracle(x: FVec, X: NormHandle, r: float, cap: Optional[int] = None,
                   uncovered_cap: Optional[int] = None) -> float:
    """
    Supremum by full enumeration without pruning.

    Up to `uncovered_cap` coordinates, families that leave coordinates uncovered
    are enumerated as well.
    """
    r = _check_r(r)
    cap = config.get("schreier.oracle_cap", 8) if cap is None else cap
    uncovered_cap = config.get("schreier.oracle_uncovered_cap", 6) if uncovered_cap is None else uncovered_cap
    support = x.support()
    check_cap(len(support), cap)
    if not support:
        return 0.0

    if len(support) <= uncovered_cap:
        subsets = (U for k in range(1, len(support) + 1) for U in combinations(support, k))
    else:
        subsets = iter([support])
    return max(partition_value(x, partition, X, r)
               for U in subsets for partition in admissible_partitions(U, cap))
