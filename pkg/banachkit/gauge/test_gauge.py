"""Tests for the interpolation gauges, their witnesses and oracles"""
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from banachkit.config import config
from banachkit.core import FVec, flat, lp_norm
from banachkit.errors import InvalidParameterError, SolverError
from banachkit.gauge import (
    GaugeParams, flat_gauge_oracle, gauge2_qpm, gauge_qpm, grid_gauge_oracle,
    inner_projection, flat_family_table,
)

PARAMS = [
    GaugeParams(1.0, 2.0, 1.0),
    GaugeParams(1.0, 3.0, 2.0),
    GaugeParams(1.5, 2.5, 2.0),
    GaugeParams(1.2, 4.0, 3.5),
    GaugeParams(2.0, 3.0, 8.0),
]

moduli = st.one_of(st.just(0.0), st.floats(min_value=0.05, max_value=1.0))
vectors = st.lists(st.tuples(moduli, st.booleans()), min_size=1, max_size=6).map(
    lambda entries: FVec.from_dense([v if positive else -v for v, positive in entries]))
params = st.sampled_from(PARAMS)


@pytest.mark.parametrize("q, p", [(1.5, 2.5), (1.0, 3.0), (1.2, 4.0)])
@pytest.mark.parametrize("force_generic", [False, True])
def test_unit_vector(q, p, force_generic):
    level = GaugeParams(q, p, 2.0)
    e1 = FVec.unit(1)
    assert gauge_qpm(e1, level, force_generic=force_generic).value == pytest.approx(0.4, rel=1e-8)
    assert gauge2_qpm(e1, level, force_generic=force_generic).value == pytest.approx(4.25 ** -0.5, rel=1e-8)


def test_zero_vector():
    for solve in (gauge_qpm, gauge2_qpm):
        result = solve(FVec(), PARAMS[2])
        assert result.value == 0.0
        assert result.y.is_zero() and result.z.is_zero()


def test_flat_closed_form_examples():
    level = GaugeParams(1.5, 2.5, 2.0)
    assert flat_gauge_oracle(1, level) == pytest.approx(0.4, rel=1e-14)
    assert flat_gauge_oracle(4, level) == pytest.approx(0.9252, rel=1e-4)
    assert gauge_qpm(flat(1.0, 4), level).value == pytest.approx(0.9252, rel=1e-4)


@pytest.mark.parametrize("level", PARAMS)
@pytest.mark.parametrize("n", range(1, 7))
def test_flat_closed_form_matches_generic_solver(level, n):
    x = FVec.from_dense([0.7 * (-1) ** i for i in range(n)])
    for solve, variant in ((gauge_qpm, "gauge"), (gauge2_qpm, "gauge2")):
        generic = solve(x, level, force_generic=True)
        assert generic.method == "solver"
        assert generic.value == pytest.approx(0.7 * flat_gauge_oracle(n, level, variant), rel=1e-6)


@given(vectors, params)
@settings(max_examples=60, deadline=None)
def test_witness_reconstructs_and_certifies(x, level):
    for solve in (gauge_qpm, gauge2_qpm):
        result = solve(x, level)
        m = level.m
        assert (x - (result.y * m + result.z * (1 / m))).sup_norm() <= 1e-9 * max(x.sup_norm(), 1.0)
        t, phi = lp_norm(result.y, level.q), lp_norm(result.z, level.p)
        bound = max(t, phi) if result.variant.value == "gauge" else math.hypot(t, phi)
        assert bound <= result.value * (1 + 1e-7) + 1e-15


@given(vectors, params)
@settings(max_examples=60, deadline=None)
def test_lp_sandwich_and_lq_bound(x, level):
    m = level.m
    value = gauge_qpm(x, level).value
    norm_p = lp_norm(x, level.p)
    assert norm_p / (m + 1 / m) - 1e-7 <= value <= m * norm_p + 1e-7
    assert value <= lp_norm(x, level.q) / (m + 1 / m) + 1e-7


@given(vectors, params, st.randoms(use_true_random=False))
@settings(max_examples=30, deadline=None)
def test_symmetric_under_permutations_and_signs(x, level, rnd):
    value = gauge_qpm(x, level).value
    for _ in range(5):
        indices = list(range(1, 40))
        rnd.shuffle(indices)
        moved = FVec({indices[k]: v * rnd.choice([-1, 1]) for k, (_, v) in enumerate(x.items())})
        assert gauge_qpm(moved, level).value == pytest.approx(value, abs=1e-7)


@given(vectors, vectors, params, st.floats(min_value=-4, max_value=4).filter(lambda c: c == 0 or abs(c) > 1e-3))
@settings(max_examples=40, deadline=None)
def test_norm_axioms(x, y, level, c):
    gx = gauge_qpm(x, level).value
    assert gauge_qpm(x * c, level).value == pytest.approx(abs(c) * gx, rel=1e-7, abs=1e-12)
    assert gauge_qpm(x + y, level).value <= gx + gauge_qpm(y, level).value + 1e-7


@given(vectors, params)
@settings(max_examples=60, deadline=None)
def test_variants_within_sqrt2(x, level):
    g = gauge_qpm(x, level).value
    g2 = gauge2_qpm(x, level).value
    assert g - 1e-7 <= g2 <= math.sqrt(2) * g + 1e-7


def test_solver_matches_grid_oracle_in_two_dimensions():
    rng = np.random.default_rng(7)
    for _ in range(25):
        level = PARAMS[rng.integers(len(PARAMS))]
        x = FVec.from_dense(rng.uniform(0.1, 1.0, size=rng.integers(1, 3)) * rng.choice([-1, 1], size=1))
        for solve, variant in ((gauge_qpm, "gauge"), (gauge2_qpm, "gauge2")):
            value = solve(x, level, force_generic=True).value
            oracle = grid_gauge_oracle(x, level, variant)
            assert value <= oracle * (1 + 1e-9)
            assert value == pytest.approx(oracle, rel=1e-4)


def test_grid_oracle_rejects_three_coordinates():
    with pytest.raises(InvalidParameterError):
        grid_gauge_oracle(FVec.from_dense([1, 1, 1]), PARAMS[2])


def _boundary_residual(a, T, q, p, points=2001, rounds=30):
    lo, hi = 0.0, math.pi / 2
    best = math.inf
    for _ in range(rounds):
        theta = np.linspace(lo, hi, points)
        u = T * np.stack([np.cos(theta) ** (2 / q), np.sin(theta) ** (2 / q)], axis=1)
        f = np.sum(np.abs(a - u) ** p, axis=1) ** (1 / p)
        k = int(np.argmin(f))
        best = min(best, float(f[k]))
        half = (hi - lo) / 8
        lo, hi = max(0.0, theta[k] - half), min(math.pi / 2, theta[k] + half)
    return best


def test_inner_projection():
    level = GaugeParams(1.5, 2.5, 2.0)
    x = FVec.from_dense([1.0, 1.0])
    assert inner_projection(x, 0.0, level).is_zero()
    assert inner_projection(x, 5.0, level) == x * 0.5

    y = inner_projection(x, 0.3, level)
    residual = lp_norm(x - y * 2.0, 2.5)
    assert lp_norm(y, 1.5) == pytest.approx(0.3, rel=1e-9)
    assert residual == pytest.approx(_boundary_residual(np.array([1.0, 1.0]), 0.6, 1.5, 2.5), rel=1e-4)


@given(vectors, params, st.floats(min_value=0.0, max_value=2.0))
@settings(max_examples=60, deadline=None)
def test_inner_projection_is_dominated_and_sign_aligned(x, level, t):
    y = inner_projection(x, t, level)
    for i, v in y.items():
        assert v * x.get(i) > 0
        assert abs(level.m * v) <= abs(x.get(i)) * (1 + 1e-12)
    assert lp_norm(y, level.q) <= t * (1 + 1e-9) + 1e-15


def test_unbounded_table():
    level = GaugeParams(1.5, 2.5, 2.0)
    table = flat_family_table("unbounded", level)
    assert table.max_rel_error <= 1e-6
    assert table.monotone
    assert all(row.value < row.m for row in table.rows)
    assert flat_family_table("unbounded", level, ms=[2, 4, 8]).sup_value > table.sup_value


def test_vanishing_table():
    level = GaugeParams(1.5, 2.5, 2.0)
    table = flat_family_table("vanishing", level, ms=[1, 2, 4])
    assert table.max_rel_error <= 1e-6
    assert table.monotone
    assert max(row.value for row in table.rows if row.n == 10 ** 6) < 0.1


@pytest.mark.parametrize("q, p, m", [(2.0, 2.0, 2.0), (0.5, 2.0, 2.0), (1.5, 2.5, 0.5), (1.5, math.inf, 2.0)])
def test_invalid_params(q, p, m):
    with pytest.raises(InvalidParameterError):
        GaugeParams(q, p, m)


def test_tol_range_enforced():
    with pytest.raises(InvalidParameterError):
        gauge_qpm(FVec.from_dense([1, 2]), PARAMS[2], tol=0.5)


def test_newton_cap_surfaces_diagnostics(monkeypatch):
    monkeypatch.setitem(config._config["gauge"], "max_newton", 1)
    with pytest.raises(SolverError) as excinfo:
        gauge_qpm(FVec.from_dense([1.0, 0.3]), GaugeParams(1.5, 2.5, 2.0))
    assert excinfo.value.diagnostics["iterations"] == 1
