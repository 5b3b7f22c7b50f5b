"""
Interpolation gauges ||x||_{q,p}^m and |||x|||_{q,p}^m with witnessing
decompositions, plus closed-form and brute-force oracles.
"""
from .oracles import flat_decomposition, flat_gauge_oracle, grid_gauge_oracle
from .solver import KKTPath, compute_gauge, gauge2_qpm, gauge_qpm, inner_projection
from .tables import FlatFamilyRow, FlatFamilyTable, flat_family_table
from .types import GaugeParams, GaugeResult, GaugeVariant, as_variant

__all__ = [
    "GaugeParams", "GaugeResult", "GaugeVariant", "as_variant",
    "KKTPath", "compute_gauge", "gauge_qpm", "gauge2_qpm", "inner_projection",
    "flat_decomposition", "flat_gauge_oracle", "grid_gauge_oracle",
    "FlatFamilyRow", "FlatFamilyTable", "flat_family_table",
]
