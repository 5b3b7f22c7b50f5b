"""Tests for space expressions: grammar, metadata, evaluation and the chain builder"""
import json
import math
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np
import pytest

from banachkit.core import FVec, lp_handle, lp_norm
from banachkit.davis import DavisParams, Schedule, Truncation, davis_norm
from banachkit.errors import EvaluationError, InvalidParameterError, SpaceSemanticError, SpaceSyntaxError
from banachkit.gauge import GaugeVariant
from banachkit.spaces import (
    ChainPolicy, DavisSpace, LpSpace, SBSpace, SpaceEvaluator, build_chain, depth, format_space,
    meta_of, norm_of, parse_space, walk,
)

DAVIS_TEXT = "davis(sb(lp(2), r=3), q=1.2, p=1.8, m=pow2, eps=1e-6)"


def test_parse_examples():
    assert parse_space("lp(2)") == LpSpace(2)
    assert parse_space("sb(lp(2), r=3)") == SBSpace(LpSpace(2), 3)
    expr = parse_space(DAVIS_TEXT)
    assert expr == DavisSpace(SBSpace(LpSpace(2), 3),
                              DavisParams(1.2, 1.8, Schedule("pow2"), Truncation("eps", 1e-6)))
    assert expr.source == DAVIS_TEXT
    assert [path for path, _ in walk(expr)] == ["davis", "davis/sb", "davis/sb/lp"]
    assert depth(expr) == 3


@pytest.mark.parametrize("text", [
    "lp(2)",
    "sb(lp(2), r=3)",
    "davis(sb(lp(2), r=3), q=1.2, p=1.8, m=pow2, eps=1e-06)",
    "davis(lp(inf), q=1.5, p=2.5, m=[2, 4, 8.5], K=3, variant=gauge, normalize=true)",
    "davis(lp(1), q=1.5, p=2.5, m=lin, K=4)",
])
def test_canonical_text_round_trips(text):
    assert format_space(parse_space(text)) == text


def test_whitespace_and_number_forms_are_normalized():
    expr = parse_space(" sb( lp( 2.0 ) ,r = 3e0 ) ")
    assert format_space(expr) == "sb(lp(2), r=3)"


def _pick(rng, items):
    return items[int(rng.integers(len(items)))]


def _random_expr(rng, levels):
    kind = _pick(rng, ["lp", "sb", "davis"]) if levels > 0 else "lp"
    if kind == "lp":
        return LpSpace(_pick(rng, [1.0, 1.5, 2.0, 3.25, 4.0, math.inf]))
    child = _random_expr(rng, levels - 1)
    if kind == "sb":
        return SBSpace(child, _pick(rng, [1.0, 2.0, 2.5, 3.0, 7.0]))

    q = _pick(rng, [1.1, 1.2, 1.5, 2.0])
    p = q + _pick(rng, [0.3, 0.5, 1.0, 2.75])
    rule = _pick(rng, ["pow2", "lin", "list"])
    schedule = Schedule("list", (1.5, 3.0, 10.0)) if rule == "list" else Schedule(rule)
    truncation = Truncation("K", int(rng.integers(0, 4)))
    if rule != "lin" and rng.random() < 0.5:
        truncation = _pick(rng, [None, Truncation("eps", 1e-6)])
    variant = _pick(rng, [GaugeVariant.GAUGE, GaugeVariant.GAUGE2])
    return DavisSpace(child, DavisParams(q, p, schedule, truncation, variant=variant,
                                         normalize=bool(rng.random() < 0.3)))


def test_round_trip_on_generated_corpus():
    rng = np.random.default_rng(0)
    for _ in range(100):
        expr = _random_expr(rng, 3)
        text = format_space(expr)
        assert parse_space(text) == expr
        assert format_space(parse_space(text)) == text


@pytest.mark.parametrize("text,position", [
    ("lp(2", 4),
    ("sb(lp(2), s=3)", 10),
    ("lq(2)", 0),
])
def test_syntax_errors_report_position(text, position):
    with pytest.raises(SpaceSyntaxError) as excinfo:
        parse_space(text)
    assert excinfo.value.position == position


def test_unknown_davis_key_is_rejected():
    text = "davis(lp(2), q=1.2, p=1.8, m=pow2, foo=1)"
    with pytest.raises(SpaceSyntaxError) as excinfo:
        parse_space(text)
    assert excinfo.value.position >= text.index(", foo")


@pytest.mark.parametrize("text,token", [
    ("lp(0.5)", "0.5"),
    ("sb(lp(2), r=0.5)", "0.5"),
    ("davis(lp(2), q=2, p=1.5, m=pow2)", "1.5"),
    ("davis(lp(2), q=1, p=1.5, m=pow2)", "1,"),
    ("davis(lp(2), q=1.2, p=1.8, m=lin, eps=1e-3)", "1e-3"),
    ("davis(lp(2), q=1.2, p=1.8, m=[4, 2])", "["),
    ("davis(lp(2), q=1.2, p=inf, m=pow2, K=4)", "inf"),
    ("davis(lp(2), q=1.2, p=inf, m=pow2)", "inf"),
])
def test_semantic_errors_point_at_the_parameter(text, token):
    with pytest.raises(SpaceSemanticError) as excinfo:
        parse_space(text)
    assert excinfo.value.position == text.index(token)


def test_meta_rules():
    lp = meta_of(parse_space("lp(2)"))
    assert (lp.p_convex, lp.lower_estimate_r, lp.symmetric) == (2.0, 2.0, True)

    sb = meta_of(parse_space("sb(lp(2), r=3)"))
    assert (sb.p_convex, sb.lower_estimate_r, sb.symmetric) == (2.0, 3.0, False)
    assert sb.spreading_basis

    assert meta_of(parse_space("sb(lp(4), r=3)")).p_convex is None
    for r in (1.0, 2.5, 9.0):
        assert meta_of(SBSpace(parse_space(DAVIS_TEXT), r)).lower_estimate_r == r

    davis = meta_of(parse_space(DAVIS_TEXT))
    assert davis.symmetric and davis.p_convex is None and davis.lower_estimate_r is None


def test_norm_of_examples():
    assert norm_of("lp(2)", FVec.from_dense([3, 4])).value == pytest.approx(5.0, rel=1e-15)

    result = norm_of("sb(lp(1), r=2)", FVec.from_dense([1, 1, 1]))
    assert result.value == pytest.approx(math.sqrt(5), rel=1e-12)
    assert result.certificate["partition"]["sets"] == [[1], [2, 3]]
    assert [c["value"] for c in result.certificate["children"]] == [1.0, 2.0]

    x = FVec({2: 0.6, 3: -0.8})
    assert norm_of("sb(lp(2), r=2)", x).value == pytest.approx(lp_norm(x, 2), rel=1e-12)


def test_davis_node_matches_direct_evaluation():
    text = "davis(lp(2), q=1.5, p=2.5, m=pow2, K=5)"
    params = DavisParams(1.5, 2.5, Schedule("pow2"), Truncation("K", 5))
    x = FVec({4: 0.3, 7: -1.0, 9: 0.25})
    result = norm_of(text, x)
    assert result.value == pytest.approx(davis_norm(x, lp_handle(2), params).value, rel=1e-12)
    assert result.certificate["K_used"] == 5
    assert len(result.certificate["children"]) == 1


@pytest.mark.parametrize("text", [
    "lp(1.5)",
    "sb(lp(2), r=3)",
    "davis(lp(2), q=1.5, p=2.5, m=pow2, K=4)",
    "sb(davis(lp(2), q=1.5, p=2.5, m=pow2, K=3), r=3)",
])
def test_every_node_is_a_norm(text):
    rng = np.random.default_rng(11)
    evaluator = SpaceEvaluator()
    expr = parse_space(text)
    for _ in range(8):
        x = FVec.from_dense(rng.uniform(-1, 1, size=int(rng.integers(1, 5))))
        y = FVec.from_dense(rng.uniform(-1, 1, size=int(rng.integers(1, 5))))
        c = float(rng.uniform(-3, 3))
        nx = evaluator.value(expr, x)
        assert evaluator.value(expr, x * c) == pytest.approx(abs(c) * nx, rel=1e-7, abs=1e-12)
        assert evaluator.value(expr, x + y) <= nx + evaluator.value(expr, y) + 1e-7


def test_symmetric_nodes_ignore_placement():
    expr = parse_space("davis(lp(2), q=1.5, p=2.5, m=pow2, K=4)")
    x = FVec({1: 0.5, 2: -0.25, 3: 1.0})
    moved = FVec({17: -1.0, 40: 0.5, 5: 0.25})
    assert SpaceEvaluator().value(expr, moved) == SpaceEvaluator().value(expr, x)


def test_size_errors_carry_the_node_path():
    evaluator = SpaceEvaluator(sb_cap=3)
    with pytest.raises(EvaluationError) as excinfo:
        evaluator.norm_of("davis(sb(lp(2), r=2), q=1.5, p=2.5, m=pow2, K=5)", FVec.from_dense([1.0, 0.5]))
    assert excinfo.value.path == "davis/sb"
    assert excinfo.value.is_size_error


def test_basis_norm_bounds():
    evaluator = SpaceEvaluator()
    assert evaluator.basis_norm_bound("lp(3)") == 1.0
    assert evaluator.basis_norm_bound("sb(lp(2), r=3)") == 1.0
    assert evaluator.basis_norm_bound("davis(lp(2), q=1.5, p=2.5, m=pow2, K=4, normalize=true)") == 1.0
    text = "davis(lp(2), q=1.5, p=2.5, m=pow2, K=4)"
    e1 = evaluator.value(parse_space(text), FVec.unit(1))
    assert evaluator.basis_norm_bound(text) == e1
    assert evaluator.value(parse_space(text), FVec.unit(12)) == e1


def test_disk_cache_round_trip(tmp_path):
    text = "sb(lp(1), r=2)"
    x = FVec.from_dense([1, 1, 1])
    first = SpaceEvaluator(cache_dir=tmp_path).norm_of(text, x)
    files = list(tmp_path.glob("*.json"))
    assert len(files) == 1
    assert json.loads(files[0].read_text())["space"] == text

    second = SpaceEvaluator(cache_dir=tmp_path).norm_of(text, x)
    assert second.value == first.value
    assert second.certificate == json.loads(json.dumps(first.certificate))


def test_disk_cache_separates_sb_modes(tmp_path):
    text = "sb(lp(1), r=2)"
    x = FVec.from_dense([0.3, 1.0, 0.2, 0.9, 0.8, 0.1, 0.7])
    heuristic = SpaceEvaluator(cache_dir=tmp_path, sb_mode="heuristic").norm_of(text, x)
    assert heuristic.certificate["exact"] is False

    cached = SpaceEvaluator(cache_dir=tmp_path, sb_mode="exact").norm_of(text, x)
    fresh = SpaceEvaluator(sb_mode="exact").norm_of(text, x)
    assert cached.value == fresh.value
    assert cached.certificate["exact"] is True
    assert len(list(tmp_path.glob("*.json"))) == 2


def test_norm_of_solves_the_top_node_once(monkeypatch):
    import banachkit.spaces.evaluator as evaluator_module

    calls = []
    original = evaluator_module.sb_norm

    def counting(*args, **kwargs):
        calls.append(args[0])
        return original(*args, **kwargs)

    monkeypatch.setattr(evaluator_module, "sb_norm", counting)
    evaluator = SpaceEvaluator()
    result = evaluator.norm_of("sb(lp(1), r=2)", FVec.from_dense([1, 1, 1]))
    assert result.value == pytest.approx(math.sqrt(5), rel=1e-12)
    assert len(calls) == 1
    assert evaluator.value(parse_space("sb(lp(1), r=2)"), FVec.from_dense([1, 1, 1])) == result.value
    assert len(calls) == 1


def test_concurrent_evaluations_agree():
    evaluator = SpaceEvaluator()
    expr = parse_space("sb(davis(lp(2), q=1.5, p=2.5, m=pow2, K=3), r=3)")
    x = FVec.from_dense([0.9, -0.4, 0.3, 0.7])
    with ThreadPoolExecutor(max_workers=8) as pool:
        values = list(pool.map(lambda _: evaluator.value(expr, x), range(16)))
    assert len(set(values)) == 1


def test_chain_level_one():
    desc = build_chain(2, 2, 1)
    level = desc.levels[0]
    assert (level.r, level.s, level.t) == (3, Fraction(4, 3), Fraction(5, 3))
    assert level.text == "davis(sb(lp(2), r=3), q=1.3333333333333333, p=1.6666666666666667, m=pow2, K=6)"
    assert parse_space(level.text) == level.expr
    assert all(row["holds"] for row in desc.inequalities())


def test_chain_level_two():
    desc = build_chain(2, 2, 2)
    second = desc.levels[1]
    assert (second.r, second.s, second.t) == (4, Fraction(10, 9), Fraction(11, 9))
    assert second.q_prev_label == "lower_estimate(r_1)"
    assert (second.p_prev, second.p_prev_label) == (Fraction(4, 3), "default:s_1")
    assert second.r > max(desc.levels[0].r, second.q_prev)
    assert 1 < second.s < second.t < second.p_prev
    assert desc.top == second.expr
    data = json.loads(json.dumps(desc.to_dict()))
    assert [lvl["r"] for lvl in data["levels"]] == ["3", "4"]


def test_chain_with_configured_proxy():
    desc = build_chain(2, 2, 2, policy=ChainPolicy(p_proxies=["3/2"]))
    second = desc.levels[1]
    assert (second.p_prev, second.p_prev_label) == (Fraction(3, 2), "configured")
    assert second.s == Fraction(7, 6)


@pytest.mark.parametrize("args", [(2, 2, 0), (1, 1, 1), (3, 2, 1), (2, 3, 1)])
def test_chain_rejects_bad_input(args):
    with pytest.raises(InvalidParameterError):
        build_chain(*args)


def test_chain_top_space_is_a_norm():
    top = build_chain(2, 2, 2).top
    evaluator = SpaceEvaluator()
    x = FVec.from_dense([0.8, -0.3])
    y = FVec.from_dense([0.1, 0.5])
    nx = evaluator.value(top, x)
    assert nx > 0
    assert evaluator.value(top, x * -2.5) == pytest.approx(2.5 * nx, rel=1e-7)
    assert evaluator.value(top, x + y) <= nx + evaluator.value(top, y) + 1e-7
