"""Vernacular commands and their parser.

A document is a sequence of dot-terminated commands; proof bullets
(-, +, *) stand alone. Declarations mirror the proof-script surface:

    Require name.
    Inductive name := | c : ty -> ... -> name | ... .
    Inductive name : ty -> ... -> Prop := | rule binders : formula | ... .
    Fixpoint name params := match p with | pat => term | ... end
        [where "a ++ b" := (name a b)].
    Notation "[]" := nil.        (also :: and ++)
    Ltac name := tactic.
    Lemma name : formula.
    Proof. ... Qed.
    suggest.  search.  search failing (t; ...; t).
"""

from __future__ import annotations

from dataclasses import dataclass

from ..engine import tactics as T
from ..engine.tactic_parser import parse_tactic_expr
from ..errors import IllTyped, ParseError
from ..kernel.decls import (ConstructorDecl, Environment, FixpointFn,
                            InductivePredicate, InductiveType, MatchBranch,
                            Notations, PredicateRule)
from ..kernel.terms import App, Con, Eq, Forall, Implies, Pred, Var
from ..syntax.lexer import Token, TokenStream, tokenize
from ..syntax.parser import (ParseCtx, finalize_formula, infer_binder_types,
                             parse_closed_formula, parse_formula, parse_term)


@dataclass(frozen=True)
class RequireCmd:
    name: str


@dataclass(frozen=True)
class DeclCmd:
    decl: object  # InductiveType | InductivePredicate | FixpointFn
    notation: tuple | None = None  # (symbol, target) from a where-clause


@dataclass(frozen=True)
class NotationCmd:
    symbol: str
    target: str


@dataclass(frozen=True)
class LtacCmd:
    name: str
    body: object


@dataclass(frozen=True)
class LemmaCmd:
    name: str
    statement: object


@dataclass(frozen=True)
class ProofCmd:
    pass


@dataclass(frozen=True)
class QedCmd:
    pass


@dataclass(frozen=True)
class BulletCmd:
    marker: str


@dataclass(frozen=True)
class TacticCmd:
    expr: object


@dataclass(frozen=True)
class SuggestCmd:
    pass


@dataclass(frozen=True)
class SearchCmd:
    pass


@dataclass(frozen=True)
class SearchFailingCmd:
    cache: tuple


def split_commands(text: str) -> list[tuple[str, int, int]]:
    """Split a document into (command text, line, col) chunks.

    Commands end at a dot token; a bullet symbol at the start of a
    command is a command of its own.
    """
    tokens = tokenize(text)
    out = []
    chunk_start = None
    for tok in tokens:
        if tok.kind == "EOF":
            break
        if chunk_start is None:
            if tok.kind == "SYM" and tok.value in ("-", "+", "*"):
                out.append((tok.value, tok.line, tok.col))
                continue
            chunk_start = tok
            chunk_tokens = []
        chunk_tokens.append(tok)
        if tok.kind == "SYM" and tok.value == ".":
            out.append((_slice_text(text, chunk_start, tok), chunk_start.line,
                        chunk_start.col))
            chunk_start = None
    if chunk_start is not None:
        raise ParseError("unterminated command (missing '.')",
                         chunk_start.line, chunk_start.col)
    return out


def _slice_text(text: str, start: Token, end: Token) -> str:
    lines = text.split("\n")
    if start.line == end.line:
        return lines[start.line - 1][start.col - 1:end.col]
    parts = [lines[start.line - 1][start.col - 1:]]
    parts.extend(lines[start.line:end.line - 1])
    parts.append(lines[end.line - 1][:end.col])
    return "\n".join(parts)


def parse_command(text: str, env: Environment):
    """Parse one command against the current environment."""
    stripped = text.strip()
    if stripped in ("-", "+", "*"):
        return BulletCmd(stripped)
    ts = TokenStream(tokenize(text))
    cmd = _parse_command(ts, env)
    ts.expect_sym(".")
    tok = ts.peek()
    if tok.kind != "EOF":
        raise ParseError(f"trailing input {tok.value!r}", tok.line, tok.col)
    return cmd


def _parse_command(ts: TokenStream, env: Environment):
    tok = ts.peek()
    if tok.kind != "IDENT":
        raise ParseError(f"expected a command, found {tok.value!r}",
                         tok.line, tok.col)
    word = tok.value
    if word == "Require":
        ts.next()
        return RequireCmd(ts.expect_ident().value)
    if word == "Inductive":
        return _parse_inductive(ts, env)
    if word == "Fixpoint":
        return _parse_fixpoint(ts, env)
    if word == "Notation":
        ts.next()
        symbol = _notation_symbol(ts)
        ts.expect_sym(":=")
        return NotationCmd(symbol, _notation_target(ts))
    if word == "Ltac":
        ts.next()
        name = ts.expect_ident().value
        ts.expect_sym(":=")
        return LtacCmd(name, parse_tactic_expr(ts, env))
    if word == "Lemma":
        ts.next()
        name = ts.expect_ident().value
        ts.expect_sym(":")
        return LemmaCmd(name, parse_closed_formula(ts, env))
    if word == "Proof":
        ts.next()
        return ProofCmd()
    if word == "Qed":
        ts.next()
        return QedCmd()
    if word == "suggest":
        ts.next()
        return SuggestCmd()
    if word == "search":
        if ts.peek(1).kind == "IDENT" and ts.peek(1).value == "failing":
            ts.next()
            ts.next()
            ts.expect_sym("(")
            inner = parse_tactic_expr(ts, env)
            ts.expect_sym(")")
            return SearchFailingCmd(tuple(T.flatten_seq(inner)))
        ts.next()
        return SearchCmd()
    return TacticCmd(parse_tactic_expr(ts, env))


def _notation_symbol(ts: TokenStream) -> str:
    tok = ts.peek()
    if tok.kind != "STRING":
        raise ParseError("expected a quoted notation string", tok.line, tok.col)
    ts.next()
    inner = [t for t in tokenize(tok.value) if t.kind != "EOF"]
    shape = [t.value if t.kind == "SYM" else "x" for t in inner]
    if shape == ["[", "]"]:
        return "[]"
    if shape == ["x", "::", "x"]:
        return "::"
    if shape == ["x", "++", "x"]:
        return "++"
    raise ParseError(f"unsupported notation {tok.value!r} "
                     "(only [], :: and ++ are available)", tok.line, tok.col)


def _notation_target(ts: TokenStream) -> str:
    if ts.eat_sym("("):
        name = ts.expect_ident().value
        while ts.peek().kind == "IDENT":
            ts.next()
        ts.expect_sym(")")
        return name
    return ts.expect_ident().value


# -- Inductive ---------------------------------------------------------------

def _parse_arrow_types(ts: TokenStream) -> list[str]:
    out = [ts.expect_ident().value]
    while ts.eat_sym("->"):
        out.append(ts.expect_ident().value)
    return out


def _parse_inductive(ts: TokenStream, env: Environment):
    ts.expect_ident("Inductive")
    name = ts.expect_ident().value
    if ts.eat_sym(":"):
        chain = _parse_arrow_types(ts)
        if chain[-1] != "Prop":
            raise ts.error("inductive type annotations must end in Prop")
        arg_types = tuple(chain[:-1])
        ts.expect_sym(":=")
        return _parse_predicate_rules(ts, env, name, arg_types)
    ts.expect_sym(":=")
    ctors = []
    ts.eat_sym("|")
    while True:
        cname = ts.expect_ident().value
        ts.expect_sym(":")
        chain = _parse_arrow_types(ts)
        if chain[-1] != name:
            raise ts.error(f"constructor {cname} must build {name}")
        ctors.append(ConstructorDecl(cname, tuple(chain[:-1])))
        if not ts.eat_sym("|"):
            break
    return DeclCmd(InductiveType(name, tuple(ctors)))


def _parse_predicate_rules(ts: TokenStream, env: Environment, name, arg_types):
    provisional = InductivePredicate(name, arg_types, ())
    env2_predicates = {**env.predicates, name: provisional}
    env2 = Environment(env.types, env2_predicates, env.fixpoints, env.lemmas,
                       env.tactic_defs, env.notations, env.constructor_owner,
                       env.rule_owner)
    rules = []
    ts.eat_sym("|")
    while True:
        rname = ts.expect_ident().value
        binder_names = []
        while ts.peek().kind == "IDENT":
            binder_names.append(ts.next().value)
        ts.expect_sym(":")
        ctx = ParseCtx({b: None for b in binder_names})
        formula = parse_formula(ts, env2, ctx)
        slots = {b: ctx.binders.get(b) for b in binder_names}
        infer_binder_types(env2, formula, slots)
        formula = finalize_formula(env2, formula, slots)
        premises = []
        while isinstance(formula, Implies):
            premises.append(formula.antecedent)
            formula = formula.consequent
        if not isinstance(formula, Pred) or formula.name != name:
            raise ts.error(f"rule {rname} must conclude {name}")
        binders = tuple((b, slots[b]) for b in binder_names)
        rules.append(PredicateRule(rname, binders, tuple(premises), formula))
        if not ts.eat_sym("|"):
            break
    return DeclCmd(InductivePredicate(name, arg_types, tuple(rules)))


# -- Fixpoint ----------------------------------------------------------------

def _parse_fix_params(ts: TokenStream, env: Environment):
    out = []
    while True:
        tok = ts.peek()
        if tok.kind == "IDENT":
            ts.next()
            out.append((tok.value, None))
        elif ts.at_sym("("):
            ts.next()
            names = []
            while ts.peek().kind == "IDENT":
                names.append(ts.next().value)
            ts.expect_sym(":")
            ty = ts.expect_ident().value
            ts.expect_sym(")")
            out.extend((n, ty) for n in names)
        else:
            break
    if not out:
        raise ts.error("fixpoint needs at least one parameter")
    return out


def _scan_where_clause(ts: TokenStream):
    """Look ahead for `where "..." := (target ...)` without consuming."""
    i = ts.pos
    tokens = ts.tokens
    while i < len(tokens) and not (tokens[i].kind == "IDENT"
                                   and tokens[i].value == "where"):
        if tokens[i].kind == "EOF":
            return None
        i += 1
    if i >= len(tokens) or tokens[i].kind == "EOF":
        return None
    j = i + 1
    if tokens[j].kind != "STRING":
        raise ParseError("where-clause needs a quoted notation",
                         tokens[j].line, tokens[j].col)
    symbol_tok = tokens[j]
    return symbol_tok


def _parse_branch_pattern(ts: TokenStream, env: Environment):
    """Constructor pattern: [], x :: y, C b1 b2 ...; returns (con, binders)."""
    if ts.eat_sym("["):
        ts.expect_sym("]")
        if env.notations.nil_con is None:
            raise ts.error("[] notation is not active")
        return env.notations.nil_con, ()
    first = ts.expect_ident().value
    if ts.eat_sym("::"):
        second = ts.expect_ident().value
        if env.notations.cons_con is None:
            raise ts.error(":: notation is not active")
        return env.notations.cons_con, (first, second)
    binders = []
    while ts.peek().kind == "IDENT":
        binders.append(ts.next().value)
    return first, tuple(binders)


def _parse_fixpoint(ts: TokenStream, env: Environment):
    ts.expect_ident("Fixpoint")
    name = ts.expect_ident().value
    params = _parse_fix_params(ts, env)
    ts.expect_sym(":=")

    notation = None
    symbol_tok = _scan_where_clause(ts)
    if symbol_tok is not None:
        inner = [t for t in tokenize(symbol_tok.value) if t.kind != "EOF"]
        shape = [t.value if t.kind == "SYM" else "x" for t in inner]
        if shape != ["x", "++", "x"]:
            raise ParseError("only an ++ where-clause is supported",
                             symbol_tok.line, symbol_tok.col)
        notation = ("++", name)

    # provisional environment: the fixpoint itself (for recursion and the
    # where-notation) with placeholder types; real checking happens later
    provisional = FixpointFn(name, tuple((p, "?") for p, _ in params), 0, "?", ())
    notations = env.notations
    if notation is not None:
        notations = Notations(notations.nil_con, notations.cons_con, name)
    env2 = Environment(env.types, env.predicates,
                       {**env.fixpoints, name: provisional}, env.lemmas,
                       env.tactic_defs, notations, env.constructor_owner,
                       env.rule_owner)

    ts.expect_ident("match")
    scrutinee = ts.expect_ident().value
    param_names = [p for p, _ in params]
    if scrutinee not in param_names:
        raise ts.error(f"match must inspect a parameter, not {scrutinee!r}")
    dec_index = param_names.index(scrutinee)
    ts.expect_ident("with")
    raw_branches = []
    ts.eat_sym("|")
    while True:
        con, binders = _parse_branch_pattern(ts, env2)
        ts.expect_sym("=>")
        ctx = ParseCtx({p: ty for p, ty in params})
        for b in binders:
            ctx.binders[b] = None
        rhs = parse_term(ts, env2, ctx)
        raw_branches.append((con, binders, rhs))
        if not ts.eat_sym("|"):
            break
    ts.expect_ident("end")
    if symbol_tok is not None:
        ts.expect_ident("where")
        if ts.peek().kind != "STRING":
            raise ts.error("expected the where-clause notation string")
        ts.next()
        ts.expect_sym(":=")
        target = _notation_target(ts)
        if target != name:
            raise ts.error("where-clause must abbreviate the fixpoint itself")

    decl = _infer_fixpoint(env, env2, name, params, dec_index, raw_branches, ts)
    return DeclCmd(decl, notation)


def _infer_fixpoint(env, env2, name, params, dec_index, raw_branches, ts):
    """Resolve parameter and result types from the match and branch bodies."""
    if not raw_branches:
        raise ts.error("fixpoint match needs branches")
    first_con = raw_branches[0][0]
    owner = env.constructor_owner.get(first_con)
    if owner is None:
        raise ts.error(f"unknown constructor {first_con!r} in match")
    ind = env.types[owner]

    slots: dict[str, str | None] = {p: ty for p, ty in params}
    if slots.get(params[dec_index][0]) not in (None, owner):
        raise ts.error(f"parameter {params[dec_index][0]} is matched as {owner}")
    slots[params[dec_index][0]] = owner
    result: list[str | None] = [None]

    ctor_types = {c.name: c.arg_types for c in ind.constructors}
    branch_ctxs = []
    for con, binders, rhs in raw_branches:
        if con not in ctor_types:
            raise ts.error(f"{con!r} is not a constructor of {owner}")
        branch_ctxs.append(dict(zip(binders, ctor_types[con])))

    def term_type(t, ctx):
        if isinstance(t, Var):
            return ctx.get(t.name) if t.name in ctx else slots.get(t.name)
        if isinstance(t, Con):
            return env.constructor(t.name)[0]
        if isinstance(t, App):
            if t.name == name:
                return result[0]
            return env.fixpoints[t.name].result_type
        return None

    def assign(t, expected, ctx) -> bool:
        changed = False
        if expected is not None and isinstance(t, Var) and t.name not in ctx:
            if slots.get(t.name) is None and t.name in slots:
                slots[t.name] = expected
                return True
            if slots.get(t.name) not in (None, expected):
                raise IllTyped(f"{t.name} used both as {slots[t.name]} and {expected}")
            return False
        if isinstance(t, Con):
            decl = env.constructor(t.name)[1]
            for a, ety in zip(t.args, decl.arg_types):
                changed |= assign(a, ety, ctx)
        elif isinstance(t, App):
            if t.name == name:
                for a, (p, _) in zip(t.args, params):
                    pty = slots.get(p)
                    changed |= assign(a, pty, ctx)
                    if pty is None:
                        aty = term_type(a, ctx)
                        if aty is not None:
                            slots[p] = aty
                            changed = True
            else:
                for a, (_, ety) in zip(t.args, env.fixpoints[t.name].params):
                    changed |= assign(a, ety, ctx)
        return changed

    for _ in range(len(slots) + 3):
        changed = False
        for (con, binders, rhs), ctx in zip(raw_branches, branch_ctxs):
            changed |= assign(rhs, result[0], ctx)
            rty = term_type(rhs, ctx)
            if rty is not None:
                if result[0] is None:
                    result[0] = rty
                    changed = True
                elif result[0] != rty:
                    raise IllTyped(f"branches of {name} disagree: "
                                   f"{result[0]} vs {rty}")
        if not changed:
            break
    unresolved = [p for p, _ in params if slots.get(p) is None]
    if unresolved or result[0] is None:
        what = ", ".join(unresolved) or "the result"
        raise ts.error(f"cannot infer the type of {what} in {name}")

    return FixpointFn(name, tuple((p, slots[p]) for p, _ in params), dec_index,
                      result[0],
                      tuple(MatchBranch(con, binders, rhs)
                            for con, binders, rhs in raw_branches))
