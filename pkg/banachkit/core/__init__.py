"""
Finite-support vectors, classical l_p norms, rearrangements, restrictions and
threshold splitting: the shared substrate of every other subpackage.
"""
from .handles import NormHandle, lp_handle
from .vectors import (
    FVec,
    FlatVec,
    Vector,
    array_lp_norm,
    as_fvec,
    flat,
    lp_norm,
    parse_vector,
    rearrange_dec,
    restrict,
    threshold_split,
)

__all__ = [
    "FVec", "FlatVec", "Vector", "NormHandle", "lp_handle",
    "array_lp_norm", "as_fvec", "flat", "lp_norm", "parse_vector",
    "rearrange_dec", "restrict", "threshold_split",
]
