"""
Space expression trees and the parameter metadata tracked through them.
"""
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, Optional, Tuple, Union

from ..davis import DavisParams
from ..errors import InvalidParameterError


@dataclass(frozen=True)
class LpSpace:
    p: float
    pos: int = field(default=0, compare=False)
    source: Optional[str] = field(default=None, compare=False, repr=False)

    kind = "lp"

    def __post_init__(self):
        if math.isnan(self.p) or self.p < 1.0:
            raise InvalidParameterError(f"lp needs p >= 1, got {self.p}")
        object.__setattr__(self, "p", float(self.p))

    @property
    def children(self) -> Tuple["SpaceExpr", ...]:
        return ()


@dataclass(frozen=True)
class SBSpace:
    child: "SpaceExpr"
    r: float
    pos: int = field(default=0, compare=False)
    source: Optional[str] = field(default=None, compare=False, repr=False)

    kind = "sb"

    def __post_init__(self):
        if not (self.r >= 1.0 and math.isfinite(self.r)):
            raise InvalidParameterError(f"sb needs a finite r >= 1, got {self.r}")
        object.__setattr__(self, "r", float(self.r))

    @property
    def children(self) -> Tuple["SpaceExpr", ...]:
        return (self.child,)


@dataclass(frozen=True)
class DavisSpace:
    """Diagonal space over `child`; the component gauges sit on the child's basis"""
    child: "SpaceExpr"
    params: DavisParams
    pos: int = field(default=0, compare=False)
    source: Optional[str] = field(default=None, compare=False, repr=False)

    kind = "davis"

    @property
    def children(self) -> Tuple["SpaceExpr", ...]:
        return (self.child,)


SpaceExpr = Union[LpSpace, SBSpace, DavisSpace]


def walk(expr: SpaceExpr, path: str = "") -> Iterator[Tuple[str, SpaceExpr]]:
    """Pre-order (path, node) pairs; paths look like davis/sb/lp"""
    path = f"{path}/{expr.kind}" if path else expr.kind
    yield path, expr
    for child in expr.children:
        yield from walk(child, path)


def depth(expr: SpaceExpr) -> int:
    return 1 + max((depth(c) for c in expr.children), default=0)


@dataclass(frozen=True)
class SpaceMeta:
    """
    What is known about a space's geometry.

    `saturated_r` is informational only and never used in a computation.
    """
    p_convex: Optional[float] = None
    lower_estimate_r: Optional[float] = None
    symmetric: bool = False
    spreading_basis: bool = False
    saturated_r: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "p_convex": self.p_convex,
            "lower_estimate_r": self.lower_estimate_r,
            "symmetric": self.symmetric,
            "spreading_basis": self.spreading_basis,
            "saturated_r": self.saturated_r,
        }


def meta_of(expr: SpaceExpr) -> SpaceMeta:
    if isinstance(expr, LpSpace):
        return SpaceMeta(p_convex=expr.p, lower_estimate_r=expr.p, symmetric=True,
                         spreading_basis=True, saturated_r=expr.p)

    if isinstance(expr, SBSpace):
        child = meta_of(expr.child)
        p_convex = child.p_convex if child.p_convex is not None and expr.r >= child.p_convex else None
        spreading = (child.symmetric and child.lower_estimate_r is not None
                     and child.lower_estimate_r <= expr.r)
        return SpaceMeta(p_convex=p_convex, lower_estimate_r=expr.r, symmetric=False,
                         spreading_basis=spreading, saturated_r=expr.r)

    if isinstance(expr, DavisSpace):
        return SpaceMeta(symmetric=True, spreading_basis=True)

    raise InvalidParameterError(f"Unknown space node {type(expr).__name__}")
