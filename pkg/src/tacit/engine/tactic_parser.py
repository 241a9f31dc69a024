"""Parser for the tactic grammar."""

from __future__ import annotations

from ..errors import ParseError
from ..kernel.decls import Environment
from ..kernel.terms import Hole
from ..syntax.lexer import TokenStream, tokenize
from ..syntax.parser import ParseCtx, parse_formula
from . import tactics as T

_KEYWORDS = {"intro", "intros", "apply", "rewrite", "reflexivity", "symmetry",
             "assumption", "f_equal", "simpl", "induction", "destruct", "auto",
             "fail", "exact", "solve", "repeat", "match", "goal", "with",
             "end", "search", "failing", "suggest"}


def parse_tactic(text: str, env: Environment) -> object:
    """Parse one tactic expression; raises ParseError with position."""
    ts = TokenStream(tokenize(text))
    t = parse_tactic_expr(ts, env)
    tok = ts.peek()
    if tok.kind != "EOF":
        raise ParseError(f"trailing input {tok.value!r}", tok.line, tok.col)
    return t


def parse_tactic_expr(ts: TokenStream, env: Environment):
    left = _parse_alt(ts, env)
    while ts.eat_sym(";"):
        right = _parse_alt(ts, env)
        left = T.Seq(left, right)
    return left


def _parse_alt(ts: TokenStream, env: Environment):
    left = _parse_unit(ts, env)
    while ts.eat_sym("+"):
        right = _parse_unit(ts, env)
        left = T.Alt(left, right)
    return left


def _ref(ts: TokenStream) -> str:
    tok = ts.peek()
    if tok.kind != "IDENT":
        raise ParseError(f"expected a name, found {tok.value!r}", tok.line, tok.col)
    return ts.next().value


def _parse_unit(ts: TokenStream, env: Environment):
    tok = ts.peek()
    if ts.at_sym("("):
        ts.next()
        inner = parse_tactic_expr(ts, env)
        ts.expect_sym(")")
        return inner
    if tok.kind != "IDENT":
        raise ParseError(f"expected a tactic, found {tok.value!r}", tok.line, tok.col)
    word = tok.value
    if word == "intro":
        ts.next()
        if ts.peek().kind == "IDENT" and ts.peek().value not in _KEYWORDS:
            return T.Intro(ts.next().value)
        return T.Intro(None)
    if word == "intros":
        ts.next()
        return T.Intros()
    if word == "apply":
        ts.next()
        return T.Apply(_ref(ts))
    if word == "rewrite":
        ts.next()
        reverse = False
        if ts.eat_sym("<-"):
            reverse = True
        elif ts.eat_sym("->"):
            reverse = False
        return T.Rewrite(_ref(ts), reverse)
    if word == "reflexivity":
        ts.next()
        return T.Reflexivity()
    if word == "symmetry":
        ts.next()
        return T.Symmetry()
    if word == "assumption":
        ts.next()
        return T.Assumption()
    if word == "f_equal":
        ts.next()
        return T.FEqual()
    if word == "simpl":
        ts.next()
        return T.Simpl()
    if word == "induction":
        ts.next()
        return T.Induction(_ref(ts))
    if word == "destruct":
        ts.next()
        return T.Destruct(_ref(ts))
    if word == "auto":
        ts.next()
        return T.Auto()
    if word == "fail":
        ts.next()
        return T.Fail()
    if word == "exact":
        ts.next()
        return T.Exact(_ref(ts))
    if word == "solve":
        ts.next()
        ts.expect_sym("[")
        inner = parse_tactic_expr(ts, env)
        ts.expect_sym("]")
        return T.Solve(inner)
    if word == "repeat":
        ts.next()
        return T.Repeat(_parse_unit(ts, env))
    if word == "match":
        return _parse_match_goal(ts, env)
    if word == "search":
        ts.next()
        ts.expect_ident("failing")
        ts.expect_sym("(")
        inner = parse_tactic_expr(ts, env)
        ts.expect_sym(")")
        return T.SearchFailing(tuple(T.flatten_seq(inner)))
    if word in _KEYWORDS:
        raise ParseError(f"misplaced keyword {word!r}", tok.line, tok.col)
    ts.next()
    return T.Call(word)


def _parse_match_goal(ts: TokenStream, env: Environment):
    ts.expect_ident("match")
    ts.expect_ident("goal")
    ts.expect_ident("with")
    arms = []
    while ts.eat_sym("|"):
        ts.expect_sym("|")
        ts.expect_sym("-")
        pattern = _parse_goal_pattern(ts, env)
        ts.expect_sym("=>")
        body = parse_tactic_expr(ts, env)
        arms.append((pattern, body))
    ts.expect_ident("end")
    if not arms:
        raise ts.error("match goal needs at least one arm")
    return T.MatchGoal(tuple(arms))


def _parse_goal_pattern(ts: TokenStream, env: Environment):
    if ts.at_sym("_") and ts.peek(1).kind == "SYM" and ts.peek(1).value == "=>":
        ts.next()
        return Hole(None)
    return parse_formula(ts, env, ParseCtx(), allow_holes=True)
