"""Tests for finite-support vectors and the classical operations"""
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from banachkit.core import (
    FVec, FlatVec, flat, lp_norm, parse_vector, rearrange_dec, restrict, threshold_split,
)
from banachkit.errors import InvalidParameterError

coeffs = st.lists(st.floats(min_value=-1, max_value=1, allow_nan=False), min_size=1, max_size=12)
exponents = st.sampled_from([1.0, 1.3, 2.0, 2.5, 4.0, math.inf])


@pytest.mark.parametrize("values, p, expected", [
    ([3, 4], 2, 5.0),
    ([1, -2, 2], 1, 5.0),
    ([1, 1, 1], math.inf, 1.0),
])
def test_lp_norm_examples(values, p, expected):
    assert lp_norm(FVec.from_dense(values), p) == pytest.approx(expected, rel=1e-15)


def test_lp_norm_of_empty_vector_is_zero():
    assert lp_norm(FVec(), 2) == 0.0


def test_lp_norm_rejects_p_below_one():
    with pytest.raises(InvalidParameterError):
        lp_norm(FVec.unit(1), 0.5)


def test_flat_norm_matches_materialized():
    x = flat(0.5, 7, start=3)
    assert lp_norm(x, 2.5) == pytest.approx(lp_norm(x.materialize(), 2.5), rel=1e-14)


@given(coeffs, coeffs, exponents, st.floats(min_value=-5, max_value=5, allow_nan=False))
@settings(max_examples=200)
def test_lp_norm_is_a_norm(a, b, p, c):
    x, y = FVec.from_dense(a), FVec.from_dense(b)
    assert lp_norm(x * c, p) == pytest.approx(abs(c) * lp_norm(x, p), rel=1e-12, abs=1e-12)
    assert lp_norm(x + y, p) <= lp_norm(x, p) + lp_norm(y, p) + 1e-12


@given(coeffs)
def test_lp_norm_non_increasing_in_p(a):
    x = FVec.from_dense(a)
    ps = [1.0, 1.5, 2.0, 3.0, 7.0, math.inf]
    norms = [lp_norm(x, p) for p in ps]
    assert all(n1 >= n2 - 1e-12 for n1, n2 in zip(norms, norms[1:]))


def test_restrict_examples():
    x = FVec.from_dense([1, 2, 3])
    assert restrict(x, {2}) == FVec({2: 2.0})
    assert restrict(x, set()).is_zero()
    assert restrict(x, {1, 2, 3, 9}) == x


@given(coeffs, st.sets(st.integers(min_value=1, max_value=12)))
def test_restrict_complement_reassembles(a, F):
    x = FVec.from_dense(a)
    rest = set(x.support()) - F
    assert restrict(x, F) + restrict(x, rest) == x


def test_rearrange_examples():
    assert rearrange_dec(FVec.from_dense([0, 3, 0, -1, 2])) == FVec.from_dense([3, 2, 1])
    assert rearrange_dec(FVec()).is_zero()
    assert rearrange_dec(FVec({7: 5.0})) == FVec({1: 5.0})


@given(coeffs, exponents)
def test_rearrange_preserves_lp_norms_exactly(a, p):
    x = FVec.from_dense(a)
    assert lp_norm(rearrange_dec(x), p) == lp_norm(x, p)


def test_threshold_split_examples():
    x = FVec.from_dense([0.5, 0.1])
    big, small = threshold_split(x, 0.2)
    assert big == FVec({1: 0.5})
    assert small == FVec({2: 0.1})

    big, small = threshold_split(x, 1.0)
    assert big.is_zero() and small == x

    big, small = threshold_split(x, 1e-300)
    assert big == x and small.is_zero()


@given(coeffs, st.floats(min_value=1e-6, max_value=2))
def test_threshold_split_is_a_selection(a, delta):
    x = FVec.from_dense(a)
    big, small = threshold_split(x, delta)
    assert big + small == x
    assert not set(big.support()) & set(small.support())
    assert np.all(np.abs(big.values) >= delta)
    assert np.all(np.abs(small.values) < delta)


def test_threshold_split_rejects_nonpositive_delta():
    with pytest.raises(InvalidParameterError):
        threshold_split(FVec.unit(1), 0.0)


@pytest.mark.parametrize("literal, expected", [
    ("[1, 0, 2]", FVec({1: 1.0, 3: 2.0})),
    ('{"2": 1.5, "7": -0.25}', FVec({2: 1.5, 7: -0.25})),
])
def test_parse_vector_literals(literal, expected):
    assert parse_vector(literal) == expected


def test_parse_flat_literal():
    x = parse_vector('{"flat": {"value": 0.5, "from": 2, "to": 5}}')
    assert isinstance(x, FlatVec)
    assert x.size == 4


@pytest.mark.parametrize("literal", [
    '{"flat": {"value": 1, "from": "a", "to": 3}}',
    '{"flat": {"value": 1, "from": 1e400, "to": 3}}',
    '{"flat": 3}',
    '{"1e400": 1}',
    {float("inf"): 1.0},
])
def test_malformed_literals_raise_invalid_parameter(literal):
    with pytest.raises(InvalidParameterError):
        parse_vector(literal)


def test_vector_invariants_enforced():
    with pytest.raises(InvalidParameterError):
        FVec({0: 1.0})
    with pytest.raises(InvalidParameterError):
        FVec({1: float("nan")})
    assert FVec({3: 0.0}).is_zero()
