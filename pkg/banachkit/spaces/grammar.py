"""
Text form of space expressions.

    expr    := lp | sb | davis
    lp      := "lp(" REAL ")"
    sb      := "sb(" expr "," "r=" REAL ")"
    davis   := "davis(" expr "," "q=" REAL "," "p=" REAL "," "m=" sched
               ("," trunc)? ("," "variant=" ("gauge" | "gauge2"))? ("," "normalize=" BOOL)? ")"
    sched   := "pow2" | "lin" | "[" REAL ("," REAL)* "]"
    trunc   := "K=" INT | "eps=" REAL

Unknown keys are rejected. `format_space` emits the canonical text, which
`parse_space` reads back to a structurally equal tree.
"""
import math
from dataclasses import dataclass, replace
from typing import Any, List, Optional, Union

import pyparsing as pp

from ..davis import DavisParams, Schedule, Truncation, format_number
from ..errors import InvalidParameterError, SpaceSemanticError, SpaceSyntaxError
from ..gauge import GaugeVariant
from .expr import DavisSpace, LpSpace, SBSpace, SpaceExpr


@dataclass
class _Tok:
    value: Any
    loc: int


@dataclass
class _Raw:
    kind: str
    loc: int
    args: List[Any]


def _located(element: pp.ParserElement) -> pp.ParserElement:
    return element.copy().add_parse_action(lambda s, loc, t: _Tok(t[0], loc))


def _key(name: str) -> pp.ParserElement:
    return pp.Suppress(pp.Keyword(name) + pp.Literal("="))


def _option(name: str, value: pp.ParserElement) -> pp.ParserElement:
    return (_key(name) + _located(value)).set_parse_action(lambda s, loc, t: _Raw(name, loc, [t[0]]))


def _grammar() -> pp.ParserElement:
    LPAR, RPAR, COMMA, LBRACK, RBRACK = map(pp.Suppress, "(),[]")

    real = pp.Regex(r"[+-]?(?:inf|(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)").set_name("REAL")
    real.set_parse_action(lambda t: float(t[0]))
    integer = pp.Regex(r"\d+").set_name("INT")
    integer.set_parse_action(lambda t: int(t[0]))
    num = _located(real)

    expr = pp.Forward().set_name("space")

    lp = pp.Suppress(pp.Keyword("lp")) + LPAR + num + RPAR
    lp.set_parse_action(lambda s, loc, t: _Raw("lp", loc, list(t)))

    sb = pp.Suppress(pp.Keyword("sb")) + LPAR + expr + COMMA + _key("r") + num + RPAR
    sb.set_parse_action(lambda s, loc, t: _Raw("sb", loc, list(t)))

    sched = (pp.Keyword("pow2") | pp.Keyword("lin")
             | pp.Group(LBRACK + pp.DelimitedList(real) + RBRACK)).set_name("schedule")
    trunc = _option("K", integer) | _option("eps", real)
    variant = _option("variant", pp.Keyword("gauge2") | pp.Keyword("gauge"))
    normalize = _option("normalize", pp.Keyword("true") | pp.Keyword("false"))

    davis = (pp.Suppress(pp.Keyword("davis")) + LPAR + expr
             + COMMA + _key("q") + num + COMMA + _key("p") + num + COMMA + _key("m") + _located(sched)
             + pp.Optional(COMMA + trunc) + pp.Optional(COMMA + variant) + pp.Optional(COMMA + normalize)
             + RPAR)
    davis.set_parse_action(lambda s, loc, t: _Raw("davis", loc, list(t)))

    expr <<= lp | sb | davis
    return expr


_EXPR = _grammar()


def _semantic(e: InvalidParameterError, loc: int) -> SpaceSemanticError:
    return SpaceSemanticError(str(e), loc)


def _build_davis(raw: _Raw) -> DavisSpace:
    child, q, p, sched, *options = raw.args
    child = _build(child)
    opts = {o.kind: o for o in options}

    try:
        if isinstance(sched.value, str):
            schedule = Schedule(sched.value)
        else:
            schedule = Schedule("list", tuple(sched.value))
    except InvalidParameterError as e:
        raise _semantic(e, sched.loc) from e

    truncation, trunc_loc = None, sched.loc
    for kind in ("K", "eps"):
        if kind in opts:
            tok = opts[kind].args[0]
            trunc_loc = tok.loc
            try:
                truncation = Truncation(kind, tok.value)
            except InvalidParameterError as e:
                raise _semantic(e, tok.loc) from e

    variant = GaugeVariant(opts["variant"].args[0].value) if "variant" in opts else GaugeVariant.GAUGE2
    normalize = opts["normalize"].args[0].value == "true" if "normalize" in opts else False

    try:
        params = DavisParams(q.value, p.value, schedule, truncation, variant=variant, normalize=normalize)
    except InvalidParameterError as e:
        if not q.value > 1.0:
            loc = q.loc
        elif not (q.value < p.value and math.isfinite(p.value)):
            loc = p.loc
        else:
            loc = trunc_loc
        raise _semantic(e, loc) from e
    return DavisSpace(child, params, pos=raw.loc)


def _build(raw: _Raw) -> SpaceExpr:
    if raw.kind == "lp":
        (p,) = raw.args
        try:
            return LpSpace(p.value, pos=raw.loc)
        except InvalidParameterError as e:
            raise _semantic(e, p.loc) from e

    if raw.kind == "sb":
        child, r = raw.args
        child = _build(child)
        try:
            return SBSpace(child, r.value, pos=raw.loc)
        except InvalidParameterError as e:
            raise _semantic(e, r.loc) from e

    return _build_davis(raw)


def parse_space(text: str) -> SpaceExpr:
    """
    Parse space text into an expression tree.

    Raises SpaceSyntaxError (position and expected token) or SpaceSemanticError
    (position of the offending parameter).
    """
    try:
        (raw,) = _EXPR.parse_string(text, parse_all=True)
    except pp.ParseException as e:
        element = getattr(e, "parser_element", None)
        expected = [str(element)] if element is not None else []
        raise SpaceSyntaxError(e.msg, e.loc, expected) from None
    return replace(_build(raw), source=text)


def format_space(expr: SpaceExpr) -> str:
    if isinstance(expr, LpSpace):
        return f"lp({format_number(expr.p)})"

    if isinstance(expr, SBSpace):
        return f"sb({format_space(expr.child)}, r={format_number(expr.r)})"

    params = expr.params
    parts = [format_space(expr.child), f"q={format_number(params.q)}", f"p={format_number(params.p)}",
             f"m={params.schedule.text()}"]
    if params.truncation is not None:
        parts.append(params.truncation.text())
    if params.variant is not GaugeVariant.GAUGE2:
        parts.append(f"variant={params.variant.value}")
    if params.normalize:
        parts.append("normalize=true")
    return f"davis({', '.join(parts)})"


def as_space(space: Union[str, SpaceExpr]) -> SpaceExpr:
    return parse_space(space) if isinstance(space, str) else space


def canonical_text(space: Union[str, SpaceExpr]) -> str:
    return format_space(as_space(space))
