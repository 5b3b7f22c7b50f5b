"""Tests for the diagonal space norm and its truncation bounds"""
import math

import numpy as np
import pytest

from banachkit.core import FVec, lp_handle, lp_norm
from banachkit.davis import (
    DavisParams, Schedule, Truncation, davis_components, davis_norm, estimate_j_constant, j_map,
    tail_bound,
)
from banachkit.errors import InvalidParameterError, SchedulePolicyError
from banachkit.config import config
from banachkit.gauge import GaugeParams, GaugeVariant, gauge_qpm

L2 = lp_handle(2)


def _random_vectors(seed, count, max_support=5):
    rng = np.random.default_rng(seed)
    return [FVec.from_dense(rng.uniform(-1, 1, size=int(rng.integers(1, max_support + 1))))
            for _ in range(count)]


def test_unit_vector_series_value():
    params = DavisParams(1.5, 2.5, Schedule("pow2"), Truncation("eps", 1e-6))
    result = davis_norm(FVec.unit(1), L2, params)
    expected = math.sqrt(math.fsum(1 / (4.0 ** k + 4.0 ** -k) for k in range(1, 80)))
    assert expected == pytest.approx(0.5642, abs=1e-4)
    assert result.value == pytest.approx(expected, abs=1e-6)
    assert result.tail_bound <= 1e-6
    assert result.K_used >= 1


def test_minimal_K_in_eps_mode():
    params = DavisParams(1.5, 2.5, Schedule("pow2"), Truncation("eps", 1e-4))
    x = FVec.from_dense([0.5, -0.25, 1.0])
    K = davis_norm(x, L2, params).K_used
    assert tail_bound(x, params, K) <= 1e-4 < tail_bound(x, params, K - 1)


def test_zero_vector():
    params = DavisParams(1.5, 2.5)
    result = davis_norm(FVec(), L2, params)
    assert (result.value, result.K_used) == (0.0, 0)


def test_monotone_in_K():
    x = FVec.from_dense([0.3, -0.9, 0.1, 0.4])
    values = [davis_norm(x, L2, DavisParams(1.5, 2.5, Schedule("pow2"), Truncation("K", K))).value
              for K in range(0, 8)]
    assert all(b >= a for a, b in zip(values, values[1:]))


@pytest.mark.parametrize("variant", ["gauge", "gauge2"])
def test_truncation_soundness(variant):
    for x in _random_vectors(1, 15):
        for K in (1, 3, 5):
            short = DavisParams(1.5, 2.5, Schedule("pow2"), Truncation("K", K), variant=variant)
            longer = DavisParams(1.5, 2.5, Schedule("pow2"), Truncation("K", K + 3), variant=variant)
            gap = abs(davis_norm(x, L2, longer).value - davis_norm(x, L2, short).value)
            assert gap <= tail_bound(x, short, K)


def test_tail_bound_examples():
    e1 = FVec.unit(1)
    params = DavisParams(1.5, 2.5, Schedule("pow2"), Truncation("K", 3))
    bounds = [tail_bound(e1, params, K) for K in range(0, 10)]
    assert all(b < a for a, b in zip(bounds, bounds[1:]))
    assert all(b <= math.sqrt(2) * 2.0 ** -K for K, b in enumerate(bounds))

    listed = DavisParams(1.5, 2.5, Schedule("list", (2, 4, 8)))
    assert tail_bound(e1, listed, 3) == 0.0
    assert davis_norm(e1, L2, listed).K_used == 3

    lin = DavisParams(1.5, 2.5, Schedule("lin"), Truncation("K", 4))
    assert math.isinf(tail_bound(e1, lin, 4))


def test_schedule_policy_errors():
    with pytest.raises(SchedulePolicyError):
        DavisParams(1.5, 2.5, Schedule("lin"), Truncation("eps", 1e-6))
    with pytest.raises(SchedulePolicyError):
        Schedule("list", (4, 2))
    with pytest.raises(SchedulePolicyError):
        davis_norm(FVec.unit(1), L2, DavisParams(1.5, 2.5, Schedule("list", (2, 4)), Truncation("K", 5)))
    with pytest.raises(InvalidParameterError):
        DavisParams(1.0, 2.5)
    with pytest.raises(InvalidParameterError):
        DavisParams(2.5, 1.5)


def test_symmetry_is_exact():
    rng = np.random.default_rng(4)
    params = DavisParams(1.5, 2.5, Schedule("pow2"), Truncation("K", 5))
    for x in _random_vectors(2, 10):
        base = davis_components(x, params, 5)
        perm = rng.permutation(np.arange(1, 30))[:len(x)]
        moved = FVec.from_arrays(perm, x.values * rng.choice([-1, 1], size=len(x)))
        assert davis_components(moved, params, 5) == base
        assert davis_norm(moved, L2, params).value == davis_norm(x, L2, params).value


def test_norm_axioms_with_fixed_K():
    params = DavisParams(1.2, 3.0, Schedule("pow2"), Truncation("K", 4))
    xs, ys = _random_vectors(5, 10), _random_vectors(6, 10)
    for x, y, c in zip(xs, ys, np.linspace(-3, 3, 10)):
        dx = davis_norm(x, L2, params).value
        assert davis_norm(x * c, L2, params).value == pytest.approx(abs(c) * dx, rel=1e-7, abs=1e-12)
        assert davis_norm(x + y, L2, params).value <= dx + davis_norm(y, L2, params).value + 1e-7


def test_components_sit_between_gauge_variants():
    params = DavisParams(1.5, 2.5, Schedule("pow2"), Truncation("K", 4))
    for x in _random_vectors(7, 10):
        for k, g2 in enumerate(davis_components(x, params, 4), start=1):
            g = gauge_qpm(x, GaugeParams(1.5, 2.5, 2.0 ** k)).value
            assert g - 1e-7 <= g2 <= math.sqrt(2) * g + 1e-7


def test_normalize_divides_by_first_basis_vector():
    params = DavisParams(1.5, 2.5, Schedule("pow2"), Truncation("K", 6), normalize=True)
    assert davis_norm(FVec.unit(1), L2, params).value == pytest.approx(1.0, rel=1e-12)
    x = FVec.from_dense([1.0, 2.0])
    raw = davis_norm(x, L2, DavisParams(1.5, 2.5, Schedule("pow2"), Truncation("K", 6)))
    normalized = davis_norm(x, L2, params)
    assert normalized.value == pytest.approx(raw.value / normalized.basis_norm, rel=1e-12)


def test_j_map_and_constant_sweep():
    x = FVec({3: 0.5, 9: -1.0})
    assert j_map(x) == x
    assert j_map(FVec()).is_zero()
    params = DavisParams(1.5, 2.5, Schedule("pow2"), Truncation("K", 5))
    report = estimate_j_constant(L2, params, n_samples=10)
    assert report.samples == 10
    assert 0.0 < report.min_ratio <= report.max_ratio < math.inf


def test_component_variant_is_not_configurable():
    # canonical text omits variant and normalize at these values
    params = DavisParams(1.5, 2.5)
    assert params.variant is GaugeVariant.GAUGE2
    assert params.normalize is False
    assert config.get("davis.variant") is None
    assert config.get("davis.normalize") is None
