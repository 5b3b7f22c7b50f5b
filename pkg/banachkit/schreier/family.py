"""
The Schreier family S = {F : min F >= |F|} and admissible partitions.
"""
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from ..config import config
from ..errors import InvalidParameterError, SizeLimitError

IndexSet = Tuple[int, ...]


def is_schreier(F: Iterable[int]) -> bool:
    """True iff F is empty or min F >= |F|"""
    F = set(F)
    return not F or min(F) >= len(F)


@dataclass(frozen=True)
class SchreierPartition:
    """Pairwise disjoint nonempty admissible sets, kept sorted by their minima"""
    sets: Tuple[IndexSet, ...] = field(default_factory=tuple)

    def __post_init__(self):
        canonical = tuple(sorted((tuple(sorted(s)) for s in self.sets), key=lambda s: s[0] if s else 0))
        seen = set()
        for s in canonical:
            if not s:
                raise InvalidParameterError("Partition sets must be nonempty")
            if not is_schreier(s):
                raise InvalidParameterError(f"Set {set(s)} is not Schreier admissible")
            if seen.intersection(s):
                raise InvalidParameterError("Partition sets must be pairwise disjoint")
            seen.update(s)
        object.__setattr__(self, "sets", canonical)

    @property
    def covered(self) -> Tuple[int, ...]:
        return tuple(sorted(i for s in self.sets for i in s))

    def __len__(self) -> int:
        return len(self.sets)

    def to_dict(self) -> Dict[str, Any]:
        return {"sets": [list(s) for s in self.sets]}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SchreierPartition":
        return cls(tuple(tuple(s) for s in data["sets"]))


def check_cap(size: int, cap: Optional[int] = None) -> int:
    cap = config.exhaustive_cap if cap is None else cap
    if size > cap:
        raise SizeLimitError(f"Support of size {size} exceeds the exhaustive cap {cap}", size, cap)
    return cap


def blocks_with_minimum(rem: Sequence[int]) -> Iterator[Tuple[IndexSet, IndexSet]]:
    """
    Admissible sets containing the smallest element i0 of `rem` (sorted), with the rest of `rem`.

    Such a set is {i0} plus at most i0 - 1 further elements of `rem`.
    """
    i0, rest = rem[0], tuple(rem[1:])
    for k in range(0, min(i0 - 1, len(rest)) + 1):
        for combo in combinations(rest, k):
            taken = set(combo)
            yield (i0,) + combo, tuple(i for i in rest if i not in taken)


def _partitions(rem: IndexSet) -> Iterator[List[IndexSet]]:
    if not rem:
        yield []
        return
    for block, remaining in blocks_with_minimum(rem):
        for tail in _partitions(remaining):
            yield [block] + tail


def admissible_partitions(support: Iterable[int], cap: Optional[int] = None) -> Iterator[SchreierPartition]:
    """Every partition of `support` into admissible sets, each exactly once"""
    rem = tuple(sorted(set(int(i) for i in support)))
    check_cap(len(rem), cap)
    for sets in _partitions(rem):
        yield SchreierPartition(tuple(sets))
