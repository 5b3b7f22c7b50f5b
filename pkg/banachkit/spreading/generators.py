"""
Sequence generators: pure maps n -> x_n into a declared space.
"""
import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Literal, Optional, Sequence, Tuple, Union

import numpy as np

from ..core import FVec, as_fvec, parse_vector
from ..errors import InvalidParameterError
from ..spaces import SpaceExpr, canonical_text

GeneratorKind = Literal["basis", "block", "constant", "shifted", "custom"]


class SequenceGenerator:
    """Base class; subclasses define `vector(n)` for n >= 1"""

    kind: str = ""
    space: str = ""

    def vector(self, n: int) -> FVec:
        raise NotImplementedError

    def __call__(self, n: int) -> FVec:
        if n < 1:
            raise InvalidParameterError(f"Sequence index must be >= 1, got {n}")
        return self.vector(n)

    def section(self, coeffs: Sequence[float], indices: Sequence[int]) -> FVec:
        """sum_i a_i x_{k_i}"""
        total = FVec()
        for a, k in zip(coeffs, indices):
            total = total + self(k) * float(a)
        return total

    def to_dict(self) -> Dict[str, Any]:
        raise NotImplementedError


@dataclass(frozen=True)
class BasisGenerator(SequenceGenerator):
    space: str
    kind: str = field(default="basis", init=False)

    def vector(self, n: int) -> FVec:
        return FVec.unit(n)

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "space": self.space}


@dataclass(frozen=True)
class BlockGenerator(SequenceGenerator):
    """
    x_n = sum_i profile_i e_{b_n + i - 1}, plus an optional flat noise block
    height * n^(-alpha) on the `noise_length` positions right after it.

    Block n starts at b_n = offset + (n - 1) * stride, so supports strictly increase.
    """
    space: str = field()
    profile: Tuple[float, ...]
    offset: int = 1
    stride: Optional[int] = None
    noise_height: float = 0.0
    noise_alpha: float = 0.5
    noise_length: int = 0
    kind: str = field(default="block", init=False)

    def __post_init__(self):
        object.__setattr__(self, "profile", tuple(float(v) for v in self.profile))
        if not self.profile:
            raise InvalidParameterError("Block profile must not be empty")
        width = len(self.profile) + self.noise_length
        stride = width if self.stride is None else int(self.stride)
        if stride < width or self.offset < 1:
            raise InvalidParameterError(f"Blocks of width {width} need stride >= width and offset >= 1")
        object.__setattr__(self, "stride", stride)

    def vector(self, n: int) -> FVec:
        start = self.offset + (n - 1) * self.stride
        values = list(self.profile)
        if self.noise_length and self.noise_height:
            values += [self.noise_height * n ** -self.noise_alpha] * self.noise_length
        return FVec.from_dense(values, start=start)

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"kind": self.kind, "space": self.space, "profile": list(self.profile),
                                "offset": self.offset, "stride": self.stride}
        if self.noise_length:
            data["noise"] = {"height": self.noise_height, "alpha": self.noise_alpha, "length": self.noise_length}
        return data


@dataclass(frozen=True)
class ConstantGenerator(SequenceGenerator):
    space: str = field()
    x: FVec
    kind: str = field(default="constant", init=False)

    def vector(self, n: int) -> FVec:
        return self.x

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "space": self.space, "vector": self.x.to_dict()}


@dataclass(frozen=True)
class ShiftedGenerator(SequenceGenerator):
    """x'_n = x_1 + x_{n+1}"""
    inner: SequenceGenerator
    kind: str = field(default="shifted", init=False)

    @property
    def space(self) -> str:
        return self.inner.space

    def vector(self, n: int) -> FVec:
        return self.inner(1) + self.inner(n + 1)

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "inner": self.inner.to_dict()}


@dataclass(frozen=True)
class CustomGenerator(SequenceGenerator):
    space: str = field()
    vectors: Tuple[FVec, ...]
    kind: str = field(default="custom", init=False)

    def vector(self, n: int) -> FVec:
        if n > len(self.vectors):
            raise InvalidParameterError(f"Custom sequence has {len(self.vectors)} terms, asked for x_{n}")
        return self.vectors[n - 1]

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "space": self.space, "vectors": [v.to_dict() for v in self.vectors]}


def singular_shift(gen: SequenceGenerator) -> SequenceGenerator:
    return ShiftedGenerator(gen)


def create_generator(kind: GeneratorKind, space: Union[str, SpaceExpr, None] = None, **params) -> SequenceGenerator:
    """
    Create a sequence generator.

    Args:
        kind: basis, block, constant, shifted or custom
        space: space the vectors are normed in (not used by shifted, which inherits it)
        params: profile/offset/stride/noise_* for block, x for constant,
            inner for shifted, vectors for custom
    """
    text = canonical_text(space) if space is not None else None
    if kind == "shifted":
        return ShiftedGenerator(params["inner"])
    if text is None:
        raise InvalidParameterError(f"Generator kind {kind!r} needs a space")

    if kind == "basis":
        return BasisGenerator(text)
    if kind == "block":
        return BlockGenerator(text, **params)
    if kind == "constant":
        return ConstantGenerator(text, as_fvec(params["x"]))
    if kind == "custom":
        return CustomGenerator(text, tuple(as_fvec(v) for v in params["vectors"]))
    raise InvalidParameterError(f"Unknown generator kind: {kind!r}")


def generator_from_dict(data: Union[str, Dict[str, Any]]) -> SequenceGenerator:
    """Inverse of `to_dict`; also accepts the JSON text"""
    if isinstance(data, str):
        data = json.loads(data)
    try:
        kind = data["kind"]
        if kind == "shifted":
            return singular_shift(generator_from_dict(data["inner"]))
        if kind == "block":
            noise = data.get("noise", {})
            return create_generator(kind, data["space"], profile=data["profile"],
                                    offset=int(data.get("offset", 1)), stride=data.get("stride"),
                                    noise_height=float(noise.get("height", 0.0)),
                                    noise_alpha=float(noise.get("alpha", 0.5)),
                                    noise_length=int(noise.get("length", 0)))
        if kind == "constant":
            return create_generator(kind, data["space"], x=parse_vector(data["vector"]))
        if kind == "custom":
            return create_generator(kind, data["space"], vectors=[parse_vector(v) for v in data["vectors"]])
        return create_generator(kind, data["space"])
    except KeyError as e:
        raise InvalidParameterError(f"Generator descriptor missing key {e}")


def planted_generators(space: Union[str, SpaceExpr], count: int, seed: int = 0,
                       max_profile: int = 3, max_noise: int = 4, noise: bool = True) -> List[BlockGenerator]:
    """
    Block generators with known profiles, for recovery experiments.

    Profiles have entries in [0.5, 1] sorted non-increasing; noise blocks stay
    below 0.25 so any threshold in (0.25, 0.5) separates them.
    """
    rng = np.random.default_rng(seed)
    gens = []
    for _ in range(count):
        size = int(rng.integers(1, max_profile + 1))
        profile = tuple(sorted(rng.uniform(0.5, 1.0, size=size), reverse=True))
        length = int(rng.integers(1, max_noise + 1)) if noise else 0
        gens.append(create_generator("block", space, profile=profile, noise_length=length,
                                     noise_height=float(rng.uniform(0.05, 0.25)) if noise else 0.0,
                                     noise_alpha=float(rng.uniform(0.25, 1.0))))
    return gens
