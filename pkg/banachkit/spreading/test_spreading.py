"""Tests for spreading-model estimates, decomposition and profile norms"""
import io
import math

import numpy as np
import pandas as pd
import pytest

from banachkit.core import FVec, lp_norm
from banachkit.errors import InvalidParameterError
from banachkit.spaces import SpaceEvaluator, parse_space
from banachkit.spreading import (
    absorption_check, cesaro_diagnostic, create_generator, decompose, equiv_constants, generator_from_dict,
    planted_generators, profile_norm, profile_vector, shift_grid, singular_shift,
    sm_estimate, sm_exact_schreier,
)


def test_shift_grid_layouts():
    assert shift_grid(2, base=8, points=3) == [(8, 9), (16, 17), (32, 33)]
    assert shift_grid(3, base=2, points=2, layout="spread") == [(3, 6, 9), (6, 12, 18)]
    assert shift_grid(20, base=8, points=1) == [tuple(range(20, 40))]


@pytest.mark.parametrize("layout", ["block", "spread"])
def test_symmetric_basis_values_are_identical(layout):
    gen = create_generator("basis", "lp(2)")
    estimate = sm_estimate(gen, (1, 1), shifts=shift_grid(2, layout=layout))
    assert len(set(estimate.values)) == 1
    assert estimate.value == pytest.approx(math.sqrt(2), rel=1e-15)
    assert estimate.stabilized
    assert estimate.delta_schedule == [0.0, 0.0]


def test_schreier_basis_matches_exact_value():
    gen = create_generator("basis", "sb(lp(2), r=2)")
    assert sm_estimate(gen, (1, 1)).value == pytest.approx(math.sqrt(2), rel=1e-12)

    rng = np.random.default_rng(3)
    for _ in range(5):
        coeffs = rng.uniform(-1, 1, size=3)
        exact = sm_exact_schreier("sb(lp(2), r=2)", coeffs)
        for layout in ("block", "spread"):
            estimate = sm_estimate(gen, coeffs, shifts=shift_grid(3, base=3, layout=layout))
            assert estimate.stabilized
            assert all(v == pytest.approx(exact, rel=1e-9) for v in estimate.values)
            assert all(b <= a + 1e-12 for a, b in zip(estimate.delta_schedule, estimate.delta_schedule[1:]))


def test_constant_generator_has_trivial_model():
    gen = create_generator("constant", "lp(2)", x=FVec.unit(1))
    estimate = sm_estimate(gen, (1, -1))
    assert estimate.values == [0.0, 0.0, 0.0]
    assert estimate.stabilized


def test_singular_shift():
    basis = create_generator("basis", "lp(2)")
    shifted = singular_shift(basis)
    assert shifted(3) == FVec({1: 1.0, 4: 1.0})
    assert sm_estimate(shifted, (1, 1)).value == pytest.approx(math.sqrt(6), rel=1e-15)

    constant = singular_shift(create_generator("constant", "lp(2)", x=FVec.unit(1)))
    assert constant(5) == FVec({1: 2.0})

    twice = singular_shift(shifted)
    assert twice(4) == FVec({1: 2.0, 2: 1.0, 6: 1.0})
    assert twice.space == "lp(2)"


@pytest.mark.parametrize("shift", [(1, 2), (5, 5), (4, 3), (4,)])
def test_shift_preconditions(shift):
    gen = create_generator("basis", "lp(2)")
    with pytest.raises(InvalidParameterError):
        sm_estimate(gen, (1, 1), shifts=[shift])


def test_exact_schreier_values():
    assert sm_exact_schreier("sb(lp(2), r=2)", (1, 1)) == pytest.approx(math.sqrt(2), rel=1e-15)
    assert sm_exact_schreier("sb(lp(1), r=2)", (1, 1, 1)) == pytest.approx(3.0, rel=1e-15)
    assert sm_exact_schreier("sb(lp(2), r=3)", (-0.7,)) == pytest.approx(0.7, rel=1e-15)
    with pytest.raises(InvalidParameterError):
        sm_exact_schreier("sb(lp(3), r=2)", (1, 1))
    with pytest.raises(InvalidParameterError):
        sm_exact_schreier("lp(2)", (1, 1))


def test_drifting_sequence_is_not_stabilized():
    gen = create_generator("block", "lp(2)", profile=(1.0,), noise_height=0.5, noise_alpha=0.5, noise_length=2)
    estimate = sm_estimate(gen, (1, 1))
    assert not estimate.stabilized
    assert len(estimate.values) == 3
    assert estimate.value == estimate.values[-1]


def test_estimate_csv():
    estimate = sm_estimate(create_generator("basis", "lp(2)"), (1, 2))
    frame = pd.read_csv(io.StringIO(estimate.to_csv()))
    assert list(frame.columns) == ["shift", "value", "delta"]
    assert list(frame["shift"]) == ["8 9", "16 17", "32 33"]
    assert frame["value"].tolist() == pytest.approx([math.sqrt(5)] * 3)
    assert math.isnan(frame["delta"][0])


def test_cesaro_trends():
    basis = cesaro_diagnostic(create_generator("basis", "lp(2)"), 6)
    assert basis.values == pytest.approx([n ** -0.5 for n in range(1, 7)], rel=1e-12)
    assert basis.non_increasing

    constant = cesaro_diagnostic(create_generator("constant", "lp(2)", x=FVec.unit(1)), 5)
    assert constant.values == pytest.approx([1.0] * 5, rel=1e-12)

    shifted = cesaro_diagnostic(singular_shift(create_generator("basis", "lp(2)")), 6)
    assert shifted.values == pytest.approx([math.sqrt(1 + 1 / n) for n in range(1, 7)], rel=1e-12)


def test_generator_descriptors_round_trip():
    gens = [
        create_generator("block", "sb(lp(2), r=2)", profile=(0.9, 0.4), noise_height=0.2, noise_length=3),
        create_generator("constant", "lp(1)", x=FVec({2: 0.5})),
        singular_shift(create_generator("basis", "lp(2)")),
        create_generator("custom", "lp(2)", vectors=[FVec.unit(1), FVec({3: -1.0})]),
    ]
    for gen in gens:
        assert generator_from_dict(gen.to_dict()) == gen
    with pytest.raises(InvalidParameterError):
        generator_from_dict({"kind": "block", "space": "lp(2)"})


def test_decompose_planted_pair():
    gen = create_generator("block", "lp(2)", profile=(0.8, 0.6))
    result = decompose(gen, [0.1], horizon=12)
    assert result.status == "ok"
    assert result.profile.values == (0.8, 0.6)
    assert all(split.z.is_zero() for split in result.splits)
    assert gen(3) == FVec({5: 0.8, 6: 0.6})


def test_decompose_planted_noise():
    gen = create_generator("block", "lp(2)", profile=(1.0,), noise_height=0.5, noise_alpha=0.5, noise_length=3)
    result = decompose(gen, [0.9], horizon=20)
    assert result.status == "ok"
    assert result.profile.values == (1.0,)
    assert result.profile.residuals == pytest.approx([0.5 * n ** -0.5 for n in range(1, 21)], rel=1e-15)
    assert result.residuals_non_increasing
    assert result.profile.truncated
    assert result.profile.tail_mass == pytest.approx(lp_norm(result.splits[-1].z, 2))
    for split in result.splits:
        assert split.y + split.z == split.x
        assert not set(split.y.support()) & set(split.z.support())


def test_decompose_fixed_vector():
    gen = create_generator("constant", "lp(2)", x=FVec.from_dense([0.3, -0.8, 0.5]))
    result = decompose(gen, [0.1], horizon=10)
    assert result.profile.values == (0.8, 0.5, 0.3)
    assert result.profile.m_delta == {0.1: 3}
    assert not result.profile.truncated


def test_decompose_profile_ignores_a_single_outlying_term():
    vectors = [FVec({2 * n - 1: 0.8, 2 * n: 0.6}) for n in range(1, 10)] + [FVec({19: 0.8, 20: 0.6, 30: 0.5})]
    gen = create_generator("custom", "lp(2)", vectors=tuple(vectors))
    result = decompose(gen, [0.1], horizon=10, window=5)
    assert result.status == "inconclusive"
    assert result.profile.values == (0.8, 0.6)
    assert result.profile.m_delta == {0.1: 2}


def test_decompose_inconclusive_cases():
    gen = create_generator("block", "lp(2)", profile=(1.0,))
    assert decompose(gen, [0.5], horizon=5).status == "inconclusive"

    slow = create_generator("block", "lp(2)", profile=(1.0,), noise_height=0.95, noise_alpha=0.5, noise_length=2)
    result = decompose(slow, [0.2], horizon=12)
    assert result.status == "inconclusive"
    assert result.window_spread > 0


@pytest.mark.parametrize("deltas", [[], [0.1, 0.2], [0.5, -0.1]])
def test_decompose_rejects_bad_schedules(deltas):
    with pytest.raises(InvalidParameterError):
        decompose(create_generator("basis", "lp(2)"), deltas, horizon=10)


def test_planted_profiles_are_recovered():
    for gen in planted_generators("lp(2)", 20, seed=5):
        result = decompose(gen, [0.4], horizon=12)
        assert result.status == "ok"
        assert result.profile.values == pytest.approx(gen.profile, abs=1e-6)
        assert result.residuals_non_increasing


def test_profile_norm_examples():
    assert profile_norm((1.0,), (1, 1), "lp(2)") == pytest.approx(math.sqrt(2), rel=1e-15)
    assert profile_norm((0.8, 0.6), (1,), "lp(3)") == pytest.approx((0.8 ** 3 + 0.6 ** 3) ** (1 / 3), rel=1e-15)
    with pytest.raises(InvalidParameterError):
        profile_norm((1.0,), (1, 1), "sb(lp(2), r=2)")


def test_profile_norm_ignores_placement():
    rng = np.random.default_rng(9)
    space = "davis(lp(2), q=1.5, p=2.5, m=pow2, K=4)"
    lam, coeffs = (0.9, 0.5), (1.0, -0.3, 0.6)
    base = profile_norm(lam, coeffs, space)
    evaluator = SpaceEvaluator()
    for _ in range(10):
        moved = profile_vector(lam, coeffs, start=int(rng.integers(1, 20)), gaps=rng.integers(0, 5, size=3))
        assert len(moved) == 6
        assert evaluator.value(parse_space(space), moved) == base


def test_equivalence_constants():
    assert equiv_constants((1.0,), (1.0,), "lp(2)", "lp(2)", 3) == (1.0, 1.0)
    low, high = equiv_constants((2.0,), (1.0,), "lp(2)", "lp(2)", 3)
    assert (low, high) == (pytest.approx(2.0), pytest.approx(2.0))
    low, high = equiv_constants((1.0,), (1.0,), "lp(1)", "lp(2)", 2,
                               sample=[(1.0, 0.0), (0.0, -1.0), (1.0, 1.0), (1.0, -1.0)])
    assert low == pytest.approx(1.0) and high == pytest.approx(math.sqrt(2))
    with pytest.raises(InvalidParameterError):
        equiv_constants((0.0,), (1.0,), "lp(2)", "lp(2)", 2)


def test_absorption_in_schreier_space():
    noisy = create_generator("block", "sb(lp(2), r=2)", profile=(0.9, 0.6), noise_height=0.2, noise_length=2)
    report = absorption_check(noisy, (0.9, 0.6), (1.0, -0.5))
    assert report.contained
    assert 1.0 <= report.constant < math.inf

    clean = create_generator("block", "sb(lp(2), r=2)", profile=(0.9, 0.6))
    report = absorption_check(clean, (0.9, 0.6), (1.0, -0.5))
    assert report.constant == pytest.approx(1.0, rel=1e-9)
