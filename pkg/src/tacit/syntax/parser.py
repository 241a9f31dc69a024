"""Parsing of terms, formulas and goal patterns against an environment.

The surface grammar mirrors the proof scripts: juxtaposition for
application, one right-associative infix level shared by :: and ++,
equations with =, -> for implication, forall (or the Unicode symbol)
with optional (x y : ty) annotations, decimal numerals as sugar for
S-towers over nat, and _ / ?x wildcards in patterns.

Binder types may be omitted; a small constraint pass infers them from
usage and rejects ambiguous or conflicting bindings.
"""

from __future__ import annotations

from ..errors import IllTyped, ParseError
from ..kernel.decls import Environment, infer_type
from ..kernel.terms import App, Con, Eq, Forall, Hole, Implies, Pred, Var
from .lexer import TokenStream


def _numeral_term(env: Environment, digits: str, tok, ts):
    if env.constructor_owner.get("O") != "nat" or env.constructor_owner.get("S") != "nat":
        raise ParseError("numerals need the nat prelude", tok.line, tok.col)
    t = Con("O")
    for _ in range(int(digits)):
        t = Con("S", (t,))
    return t


# keywords that terminate a term context
STOP_WORDS = frozenset({"end", "with", "where", "match", "Prop"})


def _parse_atom(ts: TokenStream, env: Environment, ctx, allow_holes):
    tok = ts.peek()
    if tok.kind == "IDENT" and tok.value in STOP_WORDS:
        raise ParseError(f"expected a term, found {tok.value!r}", tok.line, tok.col)
    if tok.kind == "NUMBER":
        ts.next()
        return _numeral_term(env, tok.value, tok, ts)
    if allow_holes and ts.at_sym("_"):
        ts.next()
        return Hole(None)
    if allow_holes and tok.kind == "QVAR":
        ts.next()
        return Hole(tok.value)
    if ts.at_sym("["):
        ts.next()
        ts.expect_sym("]")
        nil = env.notations.nil_con
        if nil is None:
            raise ParseError("[] notation is not active", tok.line, tok.col)
        return Con(nil)
    if ts.at_sym("("):
        ts.next()
        inner = _parse_infix(ts, env, ctx, allow_holes)
        ts.expect_sym(")")
        return inner
    if tok.kind == "IDENT":
        ts.next()
        return ("name", tok.value, tok)
    raise ParseError(f"expected a term, found {tok.value!r}", tok.line, tok.col)


def _starts_atom(ts: TokenStream, allow_holes):
    tok = ts.peek()
    if tok.kind == "IDENT":
        return tok.value not in STOP_WORDS
    if tok.kind == "NUMBER":
        return True
    if allow_holes and (tok.kind == "QVAR" or ts.at_sym("_")):
        return True
    return ts.at_sym("(", "[")


def _resolve(ts, env: Environment, ctx, node, nargs_follow):
    """Resolve a head name to Var / Con / App / Pred."""
    if not (isinstance(node, tuple) and node and node[0] == "name"):
        return node  # already a structured term
    _, name, tok = node
    if name in ctx.binders:
        return Var(name)
    if env.constructor(name) is not None:
        return Con(name)
    if name in env.fixpoints:
        return App(name)
    if name in env.predicates:
        return Pred(name)
    if ctx.free_ok:
        ctx.binders.setdefault(name, None)
        return Var(name)
    raise ParseError(f"unknown name {name!r}", tok.line, tok.col)


def _parse_application(ts: TokenStream, env, ctx, allow_holes):
    head_tok = ts.peek()
    head = _parse_atom(ts, env, ctx, allow_holes)
    args = []
    if isinstance(head, tuple) and head[0] == "name":
        while _starts_atom(ts, allow_holes):
            arg_tok = ts.peek()
            arg = _parse_atom(ts, env, ctx, allow_holes)
            arg = _resolve(ts, env, ctx, arg, 0)
            if isinstance(arg, (Con, App, Pred)) and not arg.args \
                    and _expected_arity(env, arg) != 0:
                raise ParseError(f"{_head_name(arg)} is not a standalone value",
                                 arg_tok.line, arg_tok.col)
            if isinstance(arg, Pred):
                raise ParseError("predicates cannot appear inside terms",
                                 arg_tok.line, arg_tok.col)
            args.append(arg)
        head = _resolve(ts, env, ctx, head, len(args))
        if isinstance(head, Var):
            if args:
                raise ParseError(f"variable {head.name} cannot take arguments",
                                 head_tok.line, head_tok.col)
            return head
        expected = _expected_arity(env, head)
        if len(args) != expected:
            raise ParseError(
                f"{_head_name(head)} expects {expected} arguments, got {len(args)}",
                head_tok.line, head_tok.col)
        if isinstance(head, Con):
            return Con(head.name, tuple(args))
        if isinstance(head, App):
            return App(head.name, tuple(args))
        return Pred(head.name, tuple(args))
    return head


def _head_name(node):
    return node.name


def _expected_arity(env: Environment, node):
    if isinstance(node, Con):
        return len(env.constructor(node.name)[1].arg_types)
    if isinstance(node, App):
        return len(env.fixpoints[node.name].params)
    if isinstance(node, Pred):
        return len(env.predicates[node.name].arg_types)
    return 0


def _parse_infix(ts: TokenStream, env, ctx, allow_holes):
    left_tok = ts.peek()
    left = _parse_application(ts, env, ctx, allow_holes)
    if ts.at_sym("::", "++"):
        op = ts.next()
        if isinstance(left, Pred):
            raise ParseError("predicate in term position", left_tok.line, left_tok.col)
        right = _parse_infix(ts, env, ctx, allow_holes)  # right-assoc
        if isinstance(right, Pred):
            raise ParseError("predicate in term position", op.line, op.col)
        if op.value == "::":
            con = env.notations.cons_con
            if con is None:
                raise ParseError(":: notation is not active", op.line, op.col)
            return Con(con, (left, right))
        fn = env.notations.append_fn
        if fn is None:
            raise ParseError("++ notation is not active", op.line, op.col)
        return App(fn, (left, right))
    return left


class ParseCtx:
    """Binder slots (name -> type or None) plus parsing switches."""

    def __init__(self, binders=None, free_ok=False):
        self.binders = dict(binders or {})
        self.free_ok = free_ok


def parse_term(ts: TokenStream, env: Environment, ctx: ParseCtx, allow_holes=False):
    t = _parse_infix(ts, env, ctx, allow_holes)
    if isinstance(t, Pred):
        raise ts.error("expected a term, found a predicate")
    return t


def parse_binders(ts: TokenStream, env: Environment):
    """Binder list up to (not including) the separating comma.

    Forms: `x y z` or `(x y : ty)` groups, mixed.
    """
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
            if ty not in env.types:
                raise ParseError(f"unknown type {ty!r}", tok.line, tok.col)
            ts.expect_sym(")")
            out.extend((n, ty) for n in names)
        else:
            break
    if not out:
        raise ts.error("expected at least one binder")
    return out


def parse_formula(ts: TokenStream, env: Environment, ctx: ParseCtx,
                  allow_holes=False):
    if ts.peek().kind == "FORALL":
        ts.next()
        binders = parse_binders(ts, env)
        ts.expect_sym(",")
        inner = ParseCtx(ctx.binders, ctx.free_ok)
        for name, ty in binders:
            inner.binders[name] = ty
        body = parse_formula(ts, env, inner, allow_holes)
        for name, ty in reversed(binders):
            resolved = inner.binders.get(name) if ty is None else ty
            body = Forall(name, resolved if resolved is not None else "", body)
        # propagate inferred slots for shared outer binders
        for name in ctx.binders:
            if ctx.binders[name] is None and inner.binders.get(name) is not None:
                ctx.binders[name] = inner.binders[name]
        return body
    left = _parse_formula_atom(ts, env, ctx, allow_holes)
    if ts.eat_sym("->"):
        right = parse_formula(ts, env, ctx, allow_holes)  # right-assoc
        return Implies(left, right)
    return left


def _parse_formula_atom(ts: TokenStream, env, ctx, allow_holes):
    if allow_holes and ts.at_sym("_") and not _starts_atom_after_hole(ts):
        ts.next()
        return Hole(None)
    if ts.at_sym("("):
        mark = ts.mark()
        try:
            return _parse_eq_or_pred(ts, env, ctx, allow_holes)
        except ParseError:
            ts.reset(mark)
        ts.expect_sym("(")
        inner = parse_formula(ts, env, ctx, allow_holes)
        ts.expect_sym(")")
        return inner
    return _parse_eq_or_pred(ts, env, ctx, allow_holes)


def _starts_atom_after_hole(ts):
    nxt = ts.peek(1)
    return nxt.kind in ("NUMBER", "IDENT", "QVAR") or \
        (nxt.kind == "SYM" and nxt.value in ("(", "[", "_", "::", "++", "="))


def _parse_eq_or_pred(ts: TokenStream, env, ctx, allow_holes):
    first = _parse_infix(ts, env, ctx, allow_holes)
    if isinstance(first, Pred):
        return first
    if ts.eat_sym("="):
        rhs = _parse_infix(ts, env, ctx, allow_holes)
        if isinstance(rhs, Pred):
            raise ts.error("predicate on the right of =")
        return Eq(first, rhs, "")  # type filled by inference
    raise ts.error("expected a formula")


# ---------------------------------------------------------------------------
# binder-type inference

def infer_binder_types(env: Environment, formula, slots: dict) -> dict:
    """Resolve None slots from usage; raises IllTyped on conflict/ambiguity."""
    changed = True
    rounds = 0
    while changed:
        changed = False
        rounds += 1
        if rounds > len(slots) + 2:
            break
        changed = _walk_formula(env, formula, slots)
    missing = [n for n, ty in slots.items() if ty is None]
    if missing:
        raise IllTyped(f"cannot infer type of {', '.join(sorted(missing))}")
    return slots


def _term_type(env, t, slots):
    if isinstance(t, Var):
        return slots.get(t.name)
    if isinstance(t, Hole):
        return None
    if isinstance(t, Con):
        return env.constructor(t.name)[0]
    if isinstance(t, App):
        return env.fixpoints[t.name].result_type
    return None


def _assign(env, t, expected, slots) -> bool:
    """Push an expected type into a term; returns True if a slot changed."""
    changed = False
    if isinstance(t, Var):
        current = slots.get(t.name)
        if current is None and t.name in slots:
            slots[t.name] = expected
            return True
        if current is not None and expected is not None and current != expected:
            raise IllTyped(f"{t.name} used both as {current} and {expected}")
        return False
    if isinstance(t, Hole):
        return False
    if isinstance(t, Con):
        owner, decl = env.constructor(t.name)
        if expected is not None and owner != expected:
            raise IllTyped(f"{t.name} has type {owner}, expected {expected}")
        for a, ety in zip(t.args, decl.arg_types):
            changed |= _assign(env, a, ety, slots)
        return changed
    if isinstance(t, App):
        fp = env.fixpoints[t.name]
        if expected is not None and fp.result_type != expected:
            raise IllTyped(f"{t.name} returns {fp.result_type}, expected {expected}")
        for a, (_, ety) in zip(t.args, fp.params):
            changed |= _assign(env, a, ety, slots)
        return changed
    return False


def _walk_formula(env, f, slots) -> bool:
    changed = False
    if isinstance(f, Eq):
        changed |= _assign(env, f.lhs, None, slots)
        changed |= _assign(env, f.rhs, None, slots)
        lt = _term_type(env, f.lhs, slots)
        rt = _term_type(env, f.rhs, slots)
        if lt is None and rt is not None:
            changed |= _assign(env, f.lhs, rt, slots)
        elif rt is None and lt is not None:
            changed |= _assign(env, f.rhs, lt, slots)
        elif lt is not None and rt is not None and lt != rt:
            raise IllTyped(f"equation between {lt} and {rt}")
    elif isinstance(f, Pred):
        arg_types = env.predicates[f.name].arg_types
        for a, ety in zip(f.args, arg_types):
            changed |= _assign(env, a, ety, slots)
    elif isinstance(f, Implies):
        changed |= _walk_formula(env, f.antecedent, slots)
        changed |= _walk_formula(env, f.consequent, slots)
    elif isinstance(f, Forall):
        changed |= _walk_formula(env, f.body, slots)
    elif isinstance(f, Hole):
        pass
    else:
        raise TypeError(f"not a formula: {f!r}")
    return changed


def finalize_formula(env: Environment, f, slots: dict):
    """Fill inferred binder types and equation types into the tree."""
    if isinstance(f, Eq):
        ctx = {n: ty for n, ty in slots.items() if ty is not None}
        ty = _concrete_term_type(env, f.lhs, ctx) or _concrete_term_type(env, f.rhs, ctx)
        if ty is None:
            raise IllTyped("cannot determine equation type")
        return Eq(f.lhs, f.rhs, ty)
    if isinstance(f, (Pred, Hole)):
        return f
    if isinstance(f, Implies):
        return Implies(finalize_formula(env, f.antecedent, slots),
                       finalize_formula(env, f.consequent, slots))
    if isinstance(f, Forall):
        ty = f.ty or slots.get(f.var)
        if not ty:
            raise IllTyped(f"cannot infer type of {f.var}")
        return Forall(f.var, ty, finalize_formula(env, f.body, {**slots, f.var: ty}))
    raise TypeError(f"not a formula: {f!r}")


def _concrete_term_type(env, t, ctx):
    try:
        return infer_type(env, ctx, t)
    except Exception:
        return None


def parse_closed_formula(ts: TokenStream, env: Environment):
    """A statement formula: parse, infer binder types, finalize."""
    ctx = ParseCtx()
    raw = parse_formula(ts, env, ctx)
    slots = _collect_binder_slots(raw, {})
    infer_binder_types(env, raw, slots)
    return finalize_formula(env, raw, slots)


def _collect_binder_slots(f, slots):
    if isinstance(f, Forall):
        slots[f.var] = f.ty or None
        _collect_binder_slots(f.body, slots)
    elif isinstance(f, Implies):
        _collect_binder_slots(f.antecedent, slots)
        _collect_binder_slots(f.consequent, slots)
    return slots
