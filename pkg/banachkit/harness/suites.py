"""
Invariant suites.

Every suite draws all of its randomness while building cases, so a suite's
case table depends only on (seed, n_cases, tol). Case callables are pure and
may run in any order.

Parameter grids: coefficients uniform in [-1, 1], supports drawn from
{1, ..., 12}, q from Q_GRID, p > q from P_GRID, m from M_GRID, r from R_GRID.
"""
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..config import config
from ..core import FVec, NormHandle, lp_handle, lp_norm, restrict
from ..davis import DavisParams, Truncation, davis_components, davis_norm, estimate_j_constant, tail_bound
from ..gauge import (
    GaugeParams, GaugeVariant, compute_gauge, flat_gauge_oracle, gauge2_qpm, gauge_qpm, grid_gauge_oracle,
    flat_family_table,
)
from ..gauge.tables import TABLE_KINDS
from ..schreier import flat_block_experiment, is_schreier, sb_norm, sb_norm_oracle
from ..spaces import ChainDescriptor, LpSpace, SBSpace, SpaceEvaluator, build_chain, canonical_text
from ..spreading import (
    BlockGenerator, absorption_check, cesaro_diagnostic, create_generator, decompose, planted_generators,
    shift_grid, singular_shift, sm_estimate, sm_exact_schreier,
)
from .registry import CaseFn, SuiteContext, SuiteRegistry, SuiteRunner, default_registry
from .report import CaseRecord, Provenance, Report, check

Q_GRID = (1.0, 1.25, 1.5, 2.0, 3.0)
P_GRID = (1.5, 2.0, 3.0, 4.0)
M_GRID = (1.0, 1.5, 2.0, 4.0, 8.0, 16.0)
R_GRID = (1.0, 1.5, 2.0, 3.0, 4.0, 5.0)
MAX_INDEX = 12

FLAT_PAIRS = ((1.0, 2.0), (1.5, 3.0), (2.0, 4.0))
FLAT_MS = (1.0, 2.0, 8.0)
SQRT2 = math.sqrt(2.0)


# Case generation helpers

def _random_vector(rng: np.random.Generator, max_support: int = 6, max_index: int = MAX_INDEX) -> FVec:
    size = int(rng.integers(1, max_support + 1))
    indices = rng.choice(np.arange(1, max_index + 1), size=size, replace=False)
    return FVec.from_arrays(indices, rng.uniform(-1.0, 1.0, size=size))


def _moved(rng: np.random.Generator, x: FVec) -> FVec:
    """x with its coefficients permuted onto fresh indices and random sign changes"""
    indices = rng.choice(np.arange(1, MAX_INDEX + 1), size=len(x), replace=False)
    signs = rng.choice([-1.0, 1.0], size=len(x))
    return FVec.from_arrays(indices, rng.permutation(x.values) * signs)


def _pick(rng: np.random.Generator, options: Sequence[float]) -> float:
    return float(options[int(rng.integers(len(options)))])


def _gauge_params(rng: np.random.Generator) -> GaugeParams:
    q = _pick(rng, Q_GRID)
    return GaugeParams(q, _pick(rng, [p for p in P_GRID if p > q] or [q + 1.0]), _pick(rng, M_GRID))


def _exponent_pair(rng: np.random.Generator) -> Tuple[float, float]:
    """1 <= q <= r from the grids"""
    q = _pick(rng, Q_GRID)
    return q, _pick(rng, [r for r in R_GRID if r >= q])


def _admissible_subset(rng: np.random.Generator, support: Sequence[int]) -> Tuple[int, ...]:
    for _ in range(20):
        size = int(rng.integers(1, len(support) + 1))
        F = tuple(sorted(int(i) for i in rng.choice(np.asarray(support), size=size, replace=False)))
        if is_schreier(F):
            return F
    return (int(support[-1]),)


def _rel_close(a: float, b: float, tol: float) -> bool:
    return abs(a - b) <= tol * max(1.0, abs(b))


def _sb_space(q: float, r: float) -> str:
    return canonical_text(SBSpace(LpSpace(q), r))


# gauges

def _gauge_case(x: FVec, params: GaugeParams, moved: List[FVec], tol: float) -> CaseFn:
    def run() -> List[CaseRecord]:
        g, g2 = gauge_qpm(x, params), gauge2_qpm(x, params)
        m, value = params.m, g.value
        norm_p, norm_q = lp_norm(x, params.p), lp_norm(x, params.q)
        low, high, lq = norm_p / (m + 1.0 / m), m * norm_p, norm_q / (m + 1.0 / m)
        drift = max((abs(gauge_qpm(v, params).value - value) for v in moved), default=0.0)
        slack = tol * max(1.0, value)
        inputs = {"x": x, **params.to_dict()}

        def witness():
            return {"gauge": g.to_dict(), "gauge2": g2.to_dict()}

        return [
            check("sandwich", low - slack <= value <= high + slack, Provenance.DERIVED,
                  "||x||_p / (m + 1/m) <= gauge <= m ||x||_p", inputs, [low, high], value, tol, witness),
            check("lq-bound", value <= lq + slack, Provenance.PUBLISHED,
                  "gauge <= ||x||_q / (m + 1/m)", inputs, lq, value, tol, witness),
            check("symmetry", drift <= slack, Provenance.PUBLISHED,
                  "gauge is invariant under permutations and sign changes", inputs, 0.0, drift, tol, witness),
            check("variant-sandwich", value - slack <= g2.value <= SQRT2 * value + slack, Provenance.TRIVIAL,
                  "gauge <= gauge2 <= sqrt(2) gauge", inputs, [value, SQRT2 * value], g2.value, tol, witness),
        ]
    return run


def _grid_case(x: FVec, params: GaugeParams, variant: GaugeVariant, tol: float) -> CaseFn:
    def run() -> List[CaseRecord]:
        solved = compute_gauge(x, params, variant)
        oracle = grid_gauge_oracle(x, params, variant)
        error = abs(solved.value - oracle) / oracle
        return [check("grid-oracle", error <= tol, Provenance.DERIVED, "solver agrees with refined grid search",
                      {"x": x, "variant": variant.value, **params.to_dict()}, oracle, solved.value, tol,
                      lambda: solved.to_dict())]
    return run


def _flat_case(n: int, params: GaugeParams, tol: float) -> CaseFn:
    def run() -> List[CaseRecord]:
        solved = gauge_qpm(FVec.from_dense(np.ones(n)), params, force_generic=True).value
        closed = flat_gauge_oracle(n, params)
        return [check("flat-closed-form", _rel_close(solved, closed, tol), Provenance.DERIVED,
                      "gauge of 1_N is (m N^(-1/q) + N^(-1/p) / m)^(-1)", {"N": n, **params.to_dict()},
                      closed, solved, tol)]
    return run


def _table_case(kind: str, params: GaugeParams, ms: Sequence[float], tol: float) -> CaseFn:
    trend = ("flat l_p-normalized vectors have gauges increasing toward m" if kind == "unbounded"
             else "flat l_q-normalized vectors have gauges decreasing toward 0")

    def run() -> List[CaseRecord]:
        table = flat_family_table(kind, params, ms=ms)
        inputs = {"kind": kind, "q": params.q, "p": params.p, "ms": list(ms)}
        return [
            check("table-closed-form", table.max_rel_error <= tol, Provenance.DERIVED,
                  f"{kind} family closed form", inputs, 0.0, table.max_rel_error, tol, table.to_dict),
            check("table-trend", table.monotone, Provenance.PUBLISHED, trend, inputs, True, table.monotone,
                  detail=table.to_dict),
        ]
    return run


@default_registry.suite("gauges", anchor="interpolation gauge bounds, symmetry and closed forms",
                        default_cases=500)
def gauges_suite(ctx: SuiteContext) -> List[CaseFn]:
    """Gauge sandwich, l_q bound, symmetry and variant comparison, with grid, closed-form and table checks"""
    rng = ctx.rng
    actions = int(config.get("harness.symmetry_actions", 20))
    cases: List[CaseFn] = []
    for _ in range(ctx.n_cases):
        x, params = _random_vector(rng), _gauge_params(rng)
        cases.append(_gauge_case(x, params, [_moved(rng, x) for _ in range(actions)], ctx.tolerance(1e-7)))
    for _ in range(min(100, ctx.n_cases)):
        x, params = _random_vector(rng, max_support=2), _gauge_params(rng)
        variant = GaugeVariant.GAUGE if rng.random() < 0.5 else GaugeVariant.GAUGE2
        cases.append(_grid_case(x, params, variant, ctx.tolerance(1e-4)))
    for n in range(1, 7):
        for q, p in FLAT_PAIRS:
            for m in FLAT_MS:
                cases.append(_flat_case(n, GaugeParams(q, p, m), ctx.tolerance(1e-6)))
    for kind in TABLE_KINDS:
        cases.append(_table_case(kind, GaugeParams(1.5, 3.0, 1.0), (1.0, 2.0, 4.0), ctx.tolerance(1e-6)))
    return cases


# sb

def _sb_search_case(x: FVec, q: float, r: float, F: Tuple[int, ...], signs: np.ndarray, tol: float) -> CaseFn:
    def run() -> List[CaseRecord]:
        X = lp_handle(q)
        exact = sb_norm(x, X, r, mode="exact")
        oracle = sb_norm_oracle(x, X, r)
        flipped = sb_norm(FVec.from_arrays(x.indices, x.values * signs), X, r, mode="exact").value
        local = lp_norm(restrict(x, F), q)
        inputs = {"x": x, "q": q, "r": r}
        return [
            check("oracle-agreement", _rel_close(exact.value, oracle, 1e-12), Provenance.DERIVED,
                  "pruned search matches full enumeration", inputs, oracle, exact.value, 1e-12, exact.to_dict),
            check("admissible-lower-bound", exact.value >= local - tol, Provenance.TRIVIAL,
                  "sb norm dominates ||F x||_X for admissible F", {**inputs, "F": list(F)}, local, exact.value,
                  tol, exact.to_dict),
            check("unconditional", _rel_close(flipped, exact.value, 1e-12), Provenance.TRIVIAL,
                  "sb norm is invariant under sign changes", inputs, exact.value, flipped, 1e-12),
        ]
    return run


def _schreier_support_case(x: FVec, q: float, r: float, tol: float) -> CaseFn:
    def run() -> List[CaseRecord]:
        result = sb_norm(x, lp_handle(q), r, mode="exact")
        base = lp_norm(x, q)
        return [check("admissible-support-equality", abs(result.value - base) <= tol * base, Provenance.PUBLISHED,
                      "sb norm equals the base norm on admissible supports when r >= q",
                      {"x": x, "q": q, "r": r}, base, result.value, tol, result.to_dict)]
    return run


def _convexity_case(a: FVec, b: FVec, p: float, r: float, tol: float) -> CaseFn:
    def run() -> List[CaseRecord]:
        X = lp_handle(p)
        combined = FVec.from_arrays(a.indices, (np.abs(a.values) ** p + np.abs(b.values) ** p) ** (1.0 / p))
        lhs = sb_norm(combined, X, r, mode="exact").value
        rhs = (sb_norm(a, X, r, mode="exact").value ** p + sb_norm(b, X, r, mode="exact").value ** p) ** (1.0 / p)
        return [check("p-convexity", lhs <= rhs + tol * max(1.0, rhs), Provenance.PUBLISHED,
                      "SB(l_p, r) is p-convex for r >= p", {"a": a, "b": b, "p": p, "r": r}, rhs, lhs, tol)]
    return run


def _lower_estimate_case(x: FVec, y: FVec, q: float, r: float, tol: float) -> CaseFn:
    def run() -> List[CaseRecord]:
        X = lp_handle(q)
        lhs = sb_norm(x + y, X, r, mode="exact").value ** r
        rhs = sb_norm(x, X, r, mode="exact").value ** r + sb_norm(y, X, r, mode="exact").value ** r
        return [check("lower-estimate", lhs >= rhs - tol * max(1.0, rhs), Provenance.PUBLISHED,
                      "||x + y||^r >= ||x||^r + ||y||^r for disjoint x, y", {"x": x, "y": y, "q": q, "r": r},
                      rhs, lhs, tol)]
    return run


@default_registry.suite("sb", anchor="Schreier-Baernstein norms: exact search, admissible supports, "
                                     "convexity and lower estimate", default_cases=200)
def sb_suite(ctx: SuiteContext) -> List[CaseFn]:
    """Exact SB search against the oracle, admissible-support equality, p-convexity and lower l_r estimate"""
    rng, tol = ctx.rng, ctx.tolerance(1e-7)
    cases: List[CaseFn] = []
    for _ in range(ctx.n_cases):
        x = _random_vector(rng, max_support=8)
        q, r = _pick(rng, Q_GRID), _pick(rng, R_GRID)
        F = _admissible_subset(rng, x.support())
        cases.append(_sb_search_case(x, q, r, F, rng.choice([-1.0, 1.0], size=len(x)), tol))

    for _ in range(min(100, ctx.n_cases)):
        size = int(rng.integers(1, 6))
        start = int(rng.integers(size, size + 8))
        rest = rng.choice(np.arange(start + 1, start + 13), size=size - 1, replace=False)
        x = FVec.from_arrays([start, *rest], rng.uniform(-1.0, 1.0, size=size))
        q, r = _exponent_pair(rng)
        cases.append(_schreier_support_case(x, q, r, ctx.tolerance(1e-9)))

    for _ in range(min(200, ctx.n_cases)):
        a = _random_vector(rng)
        b = FVec.from_arrays(a.indices, rng.uniform(-1.0, 1.0, size=len(a)))
        p, r = _exponent_pair(rng)
        cases.append(_convexity_case(a, b, p, r, tol))

    for _ in range(min(200, ctx.n_cases)):
        support = rng.choice(np.arange(1, MAX_INDEX + 1), size=int(rng.integers(2, 9)), replace=False)
        cut = int(rng.integers(1, support.size))
        x = FVec.from_arrays(support[:cut], rng.uniform(-1.0, 1.0, size=cut))
        y = FVec.from_arrays(support[cut:], rng.uniform(-1.0, 1.0, size=support.size - cut))
        q, r = _pick(rng, Q_GRID), _pick(rng, R_GRID)
        cases.append(_lower_estimate_case(x, y, q, r, tol))
    return cases


# sb-flat-blocks

def _flat_block_case(q: float, r: float, block_len: int, seed: int, evaluator: SpaceEvaluator) -> CaseFn:
    def run() -> List[CaseRecord]:
        space = _sb_space(q, r)
        report = flat_block_experiment(evaluator.handle(space), r, n_blocks=3, block_len=block_len,
                                       samples=5, seed=seed)
        finite = all(math.isfinite(v) and v > 0 for v in report.ratios)
        return [check("flat-block-ratios", finite, Provenance.DERIVED,
                      "normalized flat blocks against the l_r sum; the range is reported, not asserted",
                      {"space": space, "block_len": block_len}, None, report.to_dict())]
    return run


@default_registry.suite("sb-flat-blocks", anchor="finite-scale experiment on l_r behaviour of flat blocks",
                        default_cases=10)
def sb_flat_blocks_suite(ctx: SuiteContext) -> List[CaseFn]:
    """Ratios of SB norms of normalized flat block combinations to l_r sums; reported only"""
    rng = ctx.rng
    cases: List[CaseFn] = []
    for _ in range(ctx.n_cases):
        q, r = _exponent_pair(rng)
        cases.append(_flat_block_case(q, r, int(rng.integers(2, 4)), int(rng.integers(2 ** 31)), ctx.evaluator))
    return cases


# sm

def _sb_basis_case(space: str, coeffs: np.ndarray, base: int, tol: float, evaluator: SpaceEvaluator) -> CaseFn:
    def run() -> List[CaseRecord]:
        gen = create_generator("basis", space)
        exact = sm_exact_schreier(space, coeffs, evaluator)
        records = []
        for layout in ("block", "spread"):
            estimate = sm_estimate(gen, coeffs, shifts=shift_grid(len(coeffs), base=base, layout=layout),
                                   evaluator=evaluator, max_workers=1)
            error = max(abs(v - exact) for v in estimate.values) / max(exact, 1e-300)
            records.append(check(f"sb-basis-{layout}", error <= tol and estimate.stabilized, Provenance.PUBLISHED,
                                 "the SB basis generates the spreading model of the base basis",
                                 {"space": space, "coeffs": coeffs, "base": base}, exact, estimate.values, tol,
                                 estimate.to_dict))
        return records
    return run


def _constant_case(x: FVec, q: float, coeffs: np.ndarray, tol: float, evaluator: SpaceEvaluator) -> CaseFn:
    def run() -> List[CaseRecord]:
        space = canonical_text(LpSpace(q))
        estimate = sm_estimate(create_generator("constant", space, x=x), coeffs, evaluator=evaluator,
                               max_workers=1)
        expected = abs(math.fsum(coeffs)) * lp_norm(x, q)
        ok = all(abs(v - expected) <= tol * max(1.0, expected) for v in estimate.values)
        return [check("constant-sequence", ok, Provenance.TRIVIAL,
                      "a constant sequence has ||sum a_i x|| = |sum a_i| ||x||",
                      {"space": space, "x": x, "coeffs": coeffs}, expected, estimate.values, tol)]
    return run


def _shifted_case(coeffs: np.ndarray, tol: float, evaluator: SpaceEvaluator) -> CaseFn:
    def run() -> List[CaseRecord]:
        gen = singular_shift(create_generator("basis", "lp(2)"))
        estimate = sm_estimate(gen, coeffs, evaluator=evaluator, max_workers=1)
        expected = math.hypot(math.fsum(coeffs), float(np.linalg.norm(coeffs)))
        ok = all(abs(v - expected) <= tol * expected for v in estimate.values)
        return [check("singular-shift", ok, Provenance.DERIVED,
                      "x'_n = e_1 + e_(n+1) in l_2 gives sqrt((sum a)^2 + sum a^2)",
                      {"coeffs": coeffs}, expected, estimate.values, tol)]
    return run


def _cesaro_case(evaluator: SpaceEvaluator) -> CaseFn:
    def run() -> List[CaseRecord]:
        basis = cesaro_diagnostic(create_generator("basis", "lp(2)"), 8, evaluator=evaluator)
        shifted = cesaro_diagnostic(singular_shift(create_generator("basis", "lp(2)")), 8, evaluator=evaluator)
        return [
            check("cesaro-basis", basis.non_increasing, Provenance.TRIVIAL,
                  "Cesaro averages of the l_2 basis decrease", {"horizon": 8}, True, basis.to_dict()),
            check("cesaro-shifted", shifted.non_increasing and shifted.values[-1] > 1.0, Provenance.DERIVED,
                  "Cesaro averages of the shifted basis stay above ||e_1||", {"horizon": 8}, True,
                  shifted.to_dict()),
        ]
    return run


@default_registry.suite("sm", anchor="spreading models of SB bases, constant and shifted sequences",
                        default_cases=30)
def sm_suite(ctx: SuiteContext) -> List[CaseFn]:
    """Spreading-model estimates against exact SB values and closed forms"""
    rng = ctx.rng
    cases: List[CaseFn] = [_cesaro_case(ctx.evaluator)]
    for i in range(ctx.n_cases):
        coeffs = rng.uniform(-1.0, 1.0, size=int(rng.integers(1, 4)))
        if i % 3 == 0:
            q, r = _exponent_pair(rng)
            base = int(rng.integers(coeffs.size, 12))
            cases.append(_sb_basis_case(_sb_space(q, r), coeffs, base, ctx.tolerance(1e-9), ctx.evaluator))
        elif i % 3 == 1:
            cases.append(_constant_case(_random_vector(rng, 4), _pick(rng, Q_GRID), coeffs,
                                        ctx.tolerance(1e-12), ctx.evaluator))
        else:
            cases.append(_shifted_case(coeffs, ctx.tolerance(1e-12), ctx.evaluator))
    return cases


# decompose

def _decompose_case(gen: BlockGenerator, delta: float, horizon: int, tol: float) -> CaseFn:
    def run() -> List[CaseRecord]:
        result = decompose(gen, [delta], horizon=horizon)
        plant = np.asarray(gen.profile)
        found = np.asarray(result.profile.values)
        error = float(np.max(np.abs(found - plant))) if found.shape == plant.shape else math.inf
        inputs = {"generator": gen.to_dict(), "delta": delta, "horizon": horizon}
        return [
            check("profile-recovery", result.status == "ok" and error <= tol, Provenance.PUBLISHED,
                  "block sequences split into a rearrangement-convergent part and a vanishing part",
                  inputs, list(gen.profile), list(result.profile.values), tol, result.to_dict),
            check("exact-split", all(s.y + s.z == s.x for s in result.splits), Provenance.TRIVIAL,
                  "y_n + z_n = x_n", inputs, True, True),
            check("residuals-non-increasing", result.residuals_non_increasing, Provenance.DERIVED,
                  "planted noise heights decrease", inputs, True, result.profile.residuals),
        ]
    return run


@default_registry.suite("decompose", anchor="profile recovery from planted block sequences", default_cases=20)
def decompose_suite(ctx: SuiteContext) -> List[CaseFn]:
    """Recover planted profiles; noise stays below the threshold, profiles above it"""
    seed = int(ctx.rng.integers(2 ** 31))
    return [_decompose_case(gen, 0.4, 12, ctx.tolerance(1e-6))
            for gen in planted_generators("lp(2)", ctx.n_cases, seed=seed)]


# absorption

def _absorption_case(gen: BlockGenerator, coeffs: np.ndarray, evaluator: SpaceEvaluator) -> CaseFn:
    def run() -> List[CaseRecord]:
        report = absorption_check(gen, gen.profile, coeffs, evaluator=evaluator)
        return [check("absorption-containment", report.contained, Provenance.PUBLISHED,
                      "the spreading model of a mixed sequence dominates its profile sequence",
                      {"generator": gen.to_dict(), "coeffs": coeffs}, report.lower, report.to_dict(),
                      detail=report.estimate.to_dict)]
    return run


@default_registry.suite("absorption", anchor="vanishing parts are absorbed by the spreading model",
                        default_cases=10)
def absorption_suite(ctx: SuiteContext) -> List[CaseFn]:
    """Planted mixed sequences in sb(lp(2), r=2); the observed constant is reported"""
    rng = ctx.rng
    gens = planted_generators("sb(lp(2), r=2)", ctx.n_cases, seed=int(rng.integers(2 ** 31)),
                              max_profile=2, max_noise=2)
    return [_absorption_case(gen, rng.uniform(-1.0, 1.0, size=2), ctx.evaluator) for gen in gens]


# davis

def _davis_case(x: FVec, y: FVec, moved: FVec, c: float, q: float, p: float, outer_p: float, K: int,
                tol: float) -> CaseFn:
    def run() -> List[CaseRecord]:
        outer: NormHandle = lp_handle(outer_p)
        params = DavisParams(q, p, "pow2", Truncation("K", K))
        longer = DavisParams(q, p, "pow2", Truncation("K", K + 3))
        plain = DavisParams(q, p, "pow2", Truncation("K", K), variant=GaugeVariant.GAUGE)

        result = davis_norm(x, outer, params)
        value = result.value
        drift = abs(davis_norm(x, outer, longer).value - value)
        bound = tail_bound(x, params, K, outer.basis_bound)
        moved_components = davis_components(moved, params, K)
        scaled = davis_norm(x * c, outer, params).value
        summed = davis_norm(x + y, outer, params).value
        other = davis_norm(y, outer, params).value
        gauges = davis_components(x, plain, K)
        sandwich = all(g - tol <= g2 <= SQRT2 * g + tol for g, g2 in zip(gauges, result.components))
        inputs = {"x": x, "q": q, "p": p, "outer": outer_p, "K": K}
        return [
            check("truncation-soundness", drift <= bound + 1e-12, Provenance.DERIVED,
                  "|value(K + 3) - value(K)| <= tail_bound(K)", inputs, bound, drift, None, result.to_dict),
            check("symmetry", max(abs(a - b) for a, b in zip(moved_components, result.components)) <= tol,
                  Provenance.PUBLISHED, "the diagonal norm is 1-symmetric", {**inputs, "moved": moved},
                  result.components, moved_components, tol),
            check("homogeneity", abs(scaled - abs(c) * value) <= tol * max(1.0, scaled), Provenance.TRIVIAL,
                  "||c x|| = |c| ||x||", {**inputs, "c": c}, abs(c) * value, scaled, tol),
            check("triangle", summed <= value + other + tol, Provenance.TRIVIAL, "||x + y|| <= ||x|| + ||y||",
                  {**inputs, "y": y}, value + other, summed, tol),
            check("component-sandwich", sandwich, Provenance.TRIVIAL, "gauge <= gauge2 <= sqrt(2) gauge per component",
                  inputs, gauges, result.components, tol),
        ]
    return run


def _davis_e1_case(tol: float) -> CaseFn:
    def run() -> List[CaseRecord]:
        params = DavisParams(1.5, 3.0, "pow2", Truncation("eps", 1e-6))
        result = davis_norm(FVec.unit(1), lp_handle(2.0), params)
        expected = math.sqrt(math.fsum(1.0 / (4.0 ** k + 4.0 ** -k) for k in range(1, 60)))
        return [check("e1-series", abs(result.value - expected) <= tol, Provenance.DERIVED,
                      "g_k(e_1) = (m_k^2 + m_k^-2)^(-1/2) summed in l_2", {"params": params.to_dict()},
                      expected, result.value, tol, result.to_dict)]
    return run


def _j_constant_case(q: float, p: float, seed: int) -> CaseFn:
    def run() -> List[CaseRecord]:
        report = estimate_j_constant(lp_handle(2.0), DavisParams(q, p, "pow2", Truncation("K", 6)),
                                     n_samples=10, seed=seed)
        return [check("j-constant", math.isfinite(report.max_ratio), Provenance.DERIVED,
                      "observed ||j(x)||_p / ||x||_D; reported, not asserted", {"q": q, "p": p},
                      None, report.to_dict())]
    return run


@default_registry.suite("davis", anchor="diagonal space norms: truncation, symmetry and norm axioms",
                        default_cases=50)
def davis_suite(ctx: SuiteContext) -> List[CaseFn]:
    """Diagonal norms with fixed truncation over l_p outer spaces"""
    rng, tol = ctx.rng, ctx.tolerance(1e-7)
    cases: List[CaseFn] = [_davis_e1_case(ctx.tolerance(1e-4))]
    for _ in range(ctx.n_cases):
        x, y = _random_vector(rng, 5), _random_vector(rng, 5)
        q = _pick(rng, [v for v in Q_GRID if v > 1.0])
        p = _pick(rng, [v for v in P_GRID if v > q] or [q + 1.0])
        cases.append(_davis_case(x, y, _moved(rng, x), float(rng.uniform(-3.0, 3.0)), q, p,
                                 _pick(rng, (1.0, 2.0, 3.0)), int(rng.integers(2, 6)), tol))
    cases.append(_j_constant_case(1.5, 3.0, int(rng.integers(2 ** 31))))
    return cases


# chain

def _chain_parameters_case(chain: ChainDescriptor) -> CaseFn:
    def run() -> List[CaseRecord]:
        inputs = {"p0": str(chain.p0), "q0": str(chain.q0), "k": len(chain.levels)}
        return [check(f"chain-level-{row['level']}", row["holds"], Provenance.PUBLISHED, row["claim"],
                      inputs, row["rhs"], row["lhs"]) for row in chain.inequalities()]
    return run


def _chain_norm_case(space: str, x: FVec, y: FVec, moved: FVec, c: float, tol: float,
                     evaluator: SpaceEvaluator) -> CaseFn:
    def run() -> List[CaseRecord]:
        value = evaluator.norm_of(space, x).value
        scaled = evaluator.norm_of(space, x * c).value
        summed = evaluator.norm_of(space, x + y).value
        other = evaluator.norm_of(space, y).value
        shuffled = evaluator.norm_of(space, moved).value
        inputs = {"space": space, "x": x}

        def certificate():
            return {"certificate": evaluator.norm_of(space, x).certificate}

        return [
            check("positive", value > 0.0 and math.isfinite(value), Provenance.TRIVIAL, "||x|| > 0 for x != 0",
                  inputs, None, value, detail=certificate),
            check("homogeneity", abs(scaled - abs(c) * value) <= tol * max(1.0, scaled), Provenance.TRIVIAL,
                  "||c x|| = |c| ||x||", {**inputs, "c": c}, abs(c) * value, scaled, tol, certificate),
            check("triangle", summed <= value + other + tol, Provenance.TRIVIAL, "||x + y|| <= ||x|| + ||y||",
                  {**inputs, "y": y}, value + other, summed, tol, certificate),
            check("symmetry", abs(shuffled - value) <= tol * max(1.0, value), Provenance.PUBLISHED,
                  "the top diagonal space is 1-symmetric", {**inputs, "moved": moved}, value, shuffled, tol,
                  certificate),
        ]
    return run


def chain_cases(ctx: SuiteContext, chain: ChainDescriptor) -> List[CaseFn]:
    """Parameter inequalities of `chain`, then sampled norm axioms of its top space"""
    rng, tol = ctx.rng, ctx.tolerance(1e-7)
    space = canonical_text(chain.top)
    cases: List[CaseFn] = [_chain_parameters_case(chain)]
    for _ in range(ctx.n_cases):
        x, y = _random_vector(rng, 6), _random_vector(rng, 6)
        cases.append(_chain_norm_case(space, x, y, _moved(rng, x), float(rng.uniform(-3.0, 3.0)), tol,
                                      ctx.evaluator))
    return cases


@default_registry.suite("chain", anchor="iterated chain over l_2: parameter recipe and norm axioms of X_2",
                        default_cases=20)
def chain_suite(ctx: SuiteContext) -> List[CaseFn]:
    """Chain parameter inequalities for k = 2 over lp(2), then sampled norm axioms of X_2"""
    return chain_cases(ctx, build_chain(2, 2, 2))


def chain_smoke(chain: ChainDescriptor, seed: int = 0, n_cases: int = 20, tol: Optional[float] = None) -> Report:
    """Smoke report for an arbitrary chain descriptor, run through a one-off registry"""
    registry = SuiteRegistry()
    registry.register_function("chain-smoke", lambda ctx: chain_cases(ctx, chain),
                               description=f"Smoke checks of {canonical_text(chain.top)}")
    return SuiteRunner(registry).run("chain-smoke", seed=seed, n_cases=n_cases, tol=tol)
