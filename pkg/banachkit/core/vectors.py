"""
Finite-support vectors and the classical operations every norm in the package is built on.

Indices are 1-based and absolute: Schreier admissibility depends on the actual
index values, so vectors are kept sparse and dense views are produced on demand.
"""
import hashlib
import json
import math
from dataclasses import dataclass
from typing import Any, Dict, Iterable, Iterator, Mapping, Optional, Tuple, Union

import numpy as np

from ..errors import InvalidParameterError


class FVec:
    """
    Immutable finite-support real vector.

    Only nonzero coefficients are stored; indices are positive integers kept in
    ascending order. The empty vector is the zero vector.
    """

    __slots__ = ("indices", "values", "_key")

    def __init__(self, entries: Optional[Mapping[int, float]] = None):
        entries = entries or {}
        idx = np.fromiter((int(i) for i in entries.keys()), dtype=np.int64, count=len(entries))
        val = np.fromiter((float(v) for v in entries.values()), dtype=np.float64, count=len(entries))
        self._init_arrays(idx, val)

    def _init_arrays(self, idx: np.ndarray, val: np.ndarray) -> None:
        if idx.size and idx.min() < 1:
            raise InvalidParameterError(f"Vector indices must be >= 1, got {int(idx.min())}")
        if not np.all(np.isfinite(val)):
            raise InvalidParameterError("Vector coefficients must be finite")
        if np.unique(idx).size != idx.size:
            raise InvalidParameterError("Duplicate vector indices")

        keep = val != 0.0
        idx, val = idx[keep], val[keep]
        order = np.argsort(idx, kind="stable")
        idx, val = idx[order], val[order]
        idx.flags.writeable = False
        val.flags.writeable = False
        self.indices = idx
        self.values = val
        self._key = None

    @classmethod
    def from_arrays(cls, indices: Iterable[int], values: Iterable[float]) -> "FVec":
        vec = cls.__new__(cls)
        vec._init_arrays(np.asarray(list(indices), dtype=np.int64).reshape(-1),
                         np.asarray(list(values), dtype=np.float64).reshape(-1))
        return vec

    @classmethod
    def from_dense(cls, values: Iterable[float], start: int = 1) -> "FVec":
        vals = np.asarray(list(values), dtype=np.float64).reshape(-1)
        return cls.from_arrays(np.arange(start, start + vals.size), vals)

    @classmethod
    def unit(cls, index: int, coefficient: float = 1.0) -> "FVec":
        return cls({index: coefficient})

    # Accessors

    def support(self) -> Tuple[int, ...]:
        return tuple(int(i) for i in self.indices)

    def __len__(self) -> int:
        return int(self.indices.size)

    def is_zero(self) -> bool:
        return self.indices.size == 0

    def get(self, index: int) -> float:
        pos = np.searchsorted(self.indices, index)
        if pos < self.indices.size and self.indices[pos] == index:
            return float(self.values[pos])
        return 0.0

    def items(self) -> Iterator[Tuple[int, float]]:
        for i, v in zip(self.indices, self.values):
            yield int(i), float(v)

    @property
    def max_index(self) -> int:
        return int(self.indices[-1]) if self.indices.size else 0

    @property
    def min_index(self) -> int:
        return int(self.indices[0]) if self.indices.size else 0

    def sup_norm(self) -> float:
        return float(np.abs(self.values).max()) if self.values.size else 0.0

    def is_flat(self) -> bool:
        """True when every stored coefficient has the same modulus"""
        if self.values.size == 0:
            return False
        mods = np.abs(self.values)
        return bool(np.all(mods == mods[0]))

    def to_dense(self, length: Optional[int] = None) -> np.ndarray:
        """Dense prefix view: position i-1 holds coefficient i"""
        length = self.max_index if length is None else length
        out = np.zeros(length, dtype=np.float64)
        keep = self.indices <= length
        out[self.indices[keep] - 1] = self.values[keep]
        return out

    def to_dict(self) -> Dict[str, float]:
        """Sparse JSON form {"index": value}"""
        return {str(i): v for i, v in self.items()}

    # Arithmetic (returns new vectors)

    def __mul__(self, c: float) -> "FVec":
        return FVec.from_arrays(self.indices, self.values * float(c))

    __rmul__ = __mul__

    def __neg__(self) -> "FVec":
        return self * -1.0

    def __add__(self, other: "FVec") -> "FVec":
        idx = np.union1d(self.indices, other.indices)
        val = np.zeros(idx.size)
        val[np.searchsorted(idx, self.indices)] += self.values
        val[np.searchsorted(idx, other.indices)] += other.values
        return FVec.from_arrays(idx, val)

    def __sub__(self, other: "FVec") -> "FVec":
        return self + (-other)

    def abs(self) -> "FVec":
        return FVec.from_arrays(self.indices, np.abs(self.values))

    def shift(self, offset: int) -> "FVec":
        """Translate the support by offset positions"""
        return FVec.from_arrays(self.indices + offset, self.values)

    def key(self) -> str:
        """Stable digest of (indices, values) for cache keys"""
        if self._key is None:
            h = hashlib.sha1()
            h.update(self.indices.tobytes())
            h.update(self.values.tobytes())
            self._key = h.hexdigest()
        return self._key

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FVec):
            return NotImplemented
        return (np.array_equal(self.indices, other.indices)
                and np.array_equal(self.values, other.values))

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        body = ", ".join(f"{i}: {v:g}" for i, v in self.items())
        return f"FVec({{{body}}})"


@dataclass(frozen=True)
class FlatVec:
    """
    Symbolic constant vector value * 1_[start, stop].

    Lets closed-form paths handle supports of length 10^6 without materializing them.
    """
    value: float
    start: int
    stop: int

    def __post_init__(self):
        if self.start < 1 or self.stop < self.start:
            raise InvalidParameterError(f"Invalid flat interval [{self.start}, {self.stop}]")
        if not math.isfinite(self.value):
            raise InvalidParameterError("Flat value must be finite")

    @property
    def size(self) -> int:
        return self.stop - self.start + 1

    def materialize(self) -> FVec:
        return FVec.from_arrays(np.arange(self.start, self.stop + 1),
                                np.full(self.size, self.value))

    def sup_norm(self) -> float:
        return abs(self.value)

    def to_dict(self) -> Dict[str, Any]:
        return {"flat": {"value": self.value, "from": self.start, "to": self.stop}}


Vector = Union[FVec, FlatVec]


def flat(value: float, n: int, start: int = 1) -> FlatVec:
    """value * 1_n placed on [start, start + n - 1]"""
    return FlatVec(value, start, start + n - 1)


def _check_p(p: float) -> float:
    p = float(p)
    if math.isnan(p) or p < 1:
        raise InvalidParameterError(f"p must be >= 1 or inf, got {p}")
    return p


def lp_norm(x: Vector, p: float) -> float:
    """
    Classical l_p norm, p in [1, inf].

    Evaluated on the non-increasing rearrangement of |x| with max-scaling, so the
    result is exactly invariant under permutations and sign changes.
    """
    p = _check_p(p)
    if isinstance(x, FlatVec):
        if math.isinf(p):
            return abs(x.value)
        return abs(x.value) * x.size ** (1.0 / p)

    return array_lp_norm(x.values, p)


def array_lp_norm(values: np.ndarray, p: float) -> float:
    """l_p norm of a coefficient array, computed on its sorted moduli"""
    if values.size == 0:
        return 0.0
    a = np.sort(np.abs(values))[::-1]
    top = a[0]
    if math.isinf(p) or top == 0.0:
        return float(top)
    if p == 1.0:
        return float(a.sum())
    return float(top * np.sum((a / top) ** p) ** (1.0 / p))


def restrict(x: FVec, F: Iterable[int]) -> FVec:
    """Coordinate restriction F x: agrees with x on F, zero elsewhere"""
    keep = np.isin(x.indices, np.fromiter((int(i) for i in F), dtype=np.int64))
    return FVec.from_arrays(x.indices[keep], x.values[keep])


def rearrange_dec(x: FVec) -> FVec:
    """
    Non-increasing rearrangement of |x| placed on {1, ..., |supp x|}.

    Ties keep the original index order.
    """
    mods = np.abs(x.values)
    order = np.argsort(-mods, kind="stable")
    return FVec.from_arrays(np.arange(1, mods.size + 1), mods[order])


def threshold_split(x: FVec, delta: float) -> Tuple[FVec, FVec]:
    """
    Split x into (big, small) with small = entries of modulus < delta.

    A pure selection: big + small reproduces x bit for bit.
    """
    if not delta > 0:
        raise InvalidParameterError(f"delta must be positive, got {delta}")
    small_mask = np.abs(x.values) < delta
    big = FVec.from_arrays(x.indices[~small_mask], x.values[~small_mask])
    small = FVec.from_arrays(x.indices[small_mask], x.values[small_mask])
    return big, small


def parse_vector(literal: Union[str, list, dict]) -> Vector:
    """
    Parse a vector literal.

    Accepted forms: dense array [1, 0, 2]; sparse object {"2": 1.5, "7": -0.25};
    flat object {"flat": {"value": v, "from": a, "to": b}}.
    """
    data = json.loads(literal) if isinstance(literal, str) else literal

    if isinstance(data, list):
        return FVec.from_dense(data)
    if isinstance(data, dict):
        if "flat" in data:
            spec = data["flat"]
            try:
                return FlatVec(float(spec["value"]), int(spec["from"]), int(spec["to"]))
            except KeyError as e:
                raise InvalidParameterError(f"Flat vector literal missing key {e}")
            except (TypeError, ValueError, OverflowError) as e:
                raise InvalidParameterError(f"Invalid flat vector literal: {e}")
        try:
            return FVec({int(k): float(v) for k, v in data.items()})
        except (TypeError, ValueError, OverflowError) as e:
            raise InvalidParameterError(f"Invalid sparse vector literal: {e}")
    raise InvalidParameterError(f"Unsupported vector literal type: {type(data).__name__}")


def as_fvec(x: Vector) -> FVec:
    return x.materialize() if isinstance(x, FlatVec) else x
