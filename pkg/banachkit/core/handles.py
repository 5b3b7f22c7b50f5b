"""
Norm handles: a space seen only through its norm and the metadata the
combinatorial searches and series bounds rely on.
"""
from dataclasses import dataclass
from typing import Callable, Optional

from .vectors import FVec, lp_norm


@dataclass(frozen=True)
class NormHandle:
    """
    `p_convex` (when known and finite) enables the SB branch-and-bound envelope;
    without it the triangle inequality is used. `basis_bound` is an upper bound
    on sup_k ||e_k|| (1.0 for normalized bases).
    """
    norm: Callable[[FVec], float]
    p_convex: Optional[float] = None
    basis_bound: float = 1.0
    name: str = "X"

    def __call__(self, x: FVec) -> float:
        return self.norm(x)

    def unit_norm(self, index: int) -> float:
        return self.norm(FVec.unit(index))


def lp_handle(p: float) -> NormHandle:
    return NormHandle(lambda x: lp_norm(x, p), p_convex=p, name=f"lp({p:g})")
