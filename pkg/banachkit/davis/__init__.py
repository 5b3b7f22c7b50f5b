"""
Diagonal symmetric spaces over a base space, with certified series truncation
and the coefficient identity map into l_p.
"""
from .params import DavisParams, Schedule, Truncation, format_number
from .space import (
    DavisResult, JConstantReport, components_needed, davis_components, davis_norm,
    estimate_j_constant, j_map, tail_bound,
)

__all__ = [
    "DavisParams", "Schedule", "Truncation", "format_number",
    "DavisResult", "JConstantReport", "components_needed", "davis_components", "davis_norm",
    "estimate_j_constant", "j_map", "tail_bound",
]
