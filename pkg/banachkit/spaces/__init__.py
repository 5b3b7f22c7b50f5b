"""
Composed spaces: the expression language, its evaluator and the iterated chain builder.
"""
from .chain import ChainDescriptor, ChainLevel, ChainPolicy, as_fraction, build_chain
from .evaluator import NormValue, SpaceEvaluator, get_evaluator, norm_of
from .expr import DavisSpace, LpSpace, SBSpace, SpaceExpr, SpaceMeta, depth, meta_of, walk
from .grammar import as_space, canonical_text, format_space, parse_space

__all__ = [
    "ChainDescriptor", "ChainLevel", "ChainPolicy", "as_fraction", "build_chain",
    "NormValue", "SpaceEvaluator", "get_evaluator", "norm_of",
    "DavisSpace", "LpSpace", "SBSpace", "SpaceExpr", "SpaceMeta", "depth", "meta_of", "walk",
    "as_space", "canonical_text", "format_space", "parse_space",
]
