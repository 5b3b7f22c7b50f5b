"""
Finite-scale experiment on l_r behaviour of normalized flat blocks in SB(X, r).

Blocks B_1 < B_2 < ... of equal length are normalized in the SB norm, so their
sup norms shrink as the blocks grow. For coefficient vectors a the ratio
||sum a_k b_k||_SB / ||a||_r is recorded. Nothing is asserted about its range.
"""
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List

import numpy as np

from ..core import FVec, lp_norm
from ..errors import InvalidParameterError


@dataclass
class FlatBlockReport:
    r: float
    n_blocks: int
    block_len: int
    start: int
    block_sup_norms: List[float] = field(default_factory=list)
    ratios: List[float] = field(default_factory=list)

    @property
    def ratio_range(self) -> List[float]:
        return [min(self.ratios), max(self.ratios)] if self.ratios else [0.0, 0.0]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "r": self.r, "n_blocks": self.n_blocks, "block_len": self.block_len,
            "start": self.start, "block_sup_norms": self.block_sup_norms,
            "ratio_range": self.ratio_range, "samples": len(self.ratios),
        }


def flat_blocks(norm: Callable[[FVec], float], n_blocks: int, block_len: int, start: int) -> List[FVec]:
    blocks = []
    for k in range(n_blocks):
        first = start + k * block_len
        block = FVec.from_dense(np.ones(block_len), start=first)
        blocks.append(block * (1.0 / norm(block)))
    return blocks


def flat_block_experiment(norm: Callable[[FVec], float], r: float, n_blocks: int = 3,
                          block_len: int = 4, start: int = 1, samples: int = 20,
                          seed: int = 0) -> FlatBlockReport:
    """Ratios ||sum a_k b_k|| / ||a||_r over corners plus seeded uniform samples"""
    if n_blocks < 1 or block_len < 1:
        raise InvalidParameterError("Need at least one block of positive length")
    blocks = flat_blocks(norm, n_blocks, block_len, start)
    report = FlatBlockReport(r=r, n_blocks=n_blocks, block_len=block_len, start=start,
                             block_sup_norms=[b.sup_norm() for b in blocks])

    rng = np.random.default_rng(seed)
    coefficient_rows = [np.ones(n_blocks), np.eye(n_blocks)[0]]
    coefficient_rows += list(rng.uniform(-1.0, 1.0, size=(samples, n_blocks)))
    for a in coefficient_rows:
        a_vec = FVec.from_dense(a)
        if a_vec.is_zero():
            continue
        combined = FVec()
        for coefficient, block in zip(a, blocks):
            combined = combined + block * coefficient
        report.ratios.append(norm(combined) / lp_norm(a_vec, r))
    return report
