"""
Closed forms and brute-force oracles for the interpolation gauges.

Flat vectors: both balls are permutation invariant, so averaging any
decomposition of 1_N over all permutations gives a flat decomposition that is
no worse. The problem then reduces to one dimension,
    minimize f(alpha * N^(1/q), beta * N^(1/p))  s.t.  m*alpha + beta/m = 1,
solved below in closed form for both variants.
"""
import math
from typing import Tuple, Union

import numpy as np

from ..core import Vector, as_fvec
from ..errors import InvalidParameterError
from .types import GaugeParams, GaugeVariant, as_variant


def flat_decomposition(n: int, params: GaugeParams,
                       variant: Union[str, GaugeVariant] = GaugeVariant.GAUGE) -> Tuple[float, float, float]:
    """
    Optimal flat decomposition of 1_n.

    Returns (value, alpha, beta) with y = alpha * 1_n, z = beta * 1_n and
    m*alpha + beta/m = 1.
    """
    if n < 1:
        raise InvalidParameterError(f"N must be >= 1, got {n}")
    q, p, m = params.q, params.p, params.m
    if as_variant(variant) is GaugeVariant.GAUGE:
        value = 1.0 / (m * n ** (-1.0 / q) + n ** (-1.0 / p) / m)
        return value, value * n ** (-1.0 / q), value * n ** (-1.0 / p)

    A, B = n ** (2.0 / q), n ** (2.0 / p)
    D = m * m / A + 1.0 / (m * m * B)
    return D ** -0.5, m / (A * D), 1.0 / (m * B * D)


def flat_gauge_oracle(n: int, params: GaugeParams,
                      variant: Union[str, GaugeVariant] = GaugeVariant.GAUGE) -> float:
    """Closed-form gauge of 1_n"""
    return flat_decomposition(n, params, variant)[0]


def grid_gauge_oracle(x: Vector, params: GaugeParams,
                      variant: Union[str, GaugeVariant] = GaugeVariant.GAUGE,
                      points: int = 61, rounds: int = 60) -> float:
    """
    Dense grid search with zoom refinement over decompositions of x, |supp x| <= 2.

    Searches u = m*y over the box [0, |x|] (an optimal decomposition never
    overshoots a coordinate). Each round recenters on the best grid point and
    halves the box.
    """
    x = as_fvec(x)
    a = np.abs(x.values)
    if a.size == 0:
        return 0.0
    if a.size > 2:
        raise InvalidParameterError(f"Grid oracle supports at most 2 coordinates, got {a.size}")

    q, p, m = params.q, params.p, params.m
    use_max = as_variant(variant) is GaugeVariant.GAUGE
    lo, hi = np.zeros_like(a), a.copy()
    best = math.inf

    for _ in range(rounds):
        axes = [np.linspace(l, h, points) for l, h in zip(lo, hi)]
        grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, a.size)
        t = np.sum(grid ** q, axis=1) ** (1.0 / q) / m
        phi = m * np.sum(np.abs(a - grid) ** p, axis=1) ** (1.0 / p)
        f = np.maximum(t, phi) if use_max else np.hypot(t, phi)
        k = int(np.argmin(f))
        best = min(best, float(f[k]))
        half = (hi - lo) / 4.0
        lo = np.maximum(0.0, grid[k] - half)
        hi = np.minimum(a, grid[k] + half)

    return best
