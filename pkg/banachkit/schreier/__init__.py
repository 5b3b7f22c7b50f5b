"""
Schreier admissibility and Schreier-Baernstein norms over any base space that
exposes a monotone 1-unconditional norm.
"""
from ..core import NormHandle, lp_handle
from .experiments import FlatBlockReport, flat_block_experiment, flat_blocks
from .family import SchreierPartition, admissible_partitions, is_schreier
from .norm import SbResult, partition_value, sb_norm, sb_norm_oracle

__all__ = [
    "SchreierPartition", "admissible_partitions", "is_schreier",
    "NormHandle", "SbResult", "lp_handle", "partition_value", "sb_norm", "sb_norm_oracle",
    "FlatBlockReport", "flat_block_experiment", "flat_blocks",
]
