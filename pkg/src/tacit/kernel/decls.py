"""Declarations and the persistent environment.

An Environment is an immutable value: `declare` returns a new one and
never touches its input, which is what makes session snapshots and
undo synchronization trivial. Five namespaces are kept disjoint:
types (inductive types and predicates share it), constructors
(including predicate rules), functions, lemmas and tactic definitions.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from ..errors import (ArityMismatch, DuplicateName, IllTyped,
                      TerminationCheckFailure, UnknownReference)
from .terms import (App, Con, Eq, Forall, Formula, Implies, Pred, Term, Var,
                    check_name, formula_free_vars, term_free_vars)


@dataclass(frozen=True)
class ConstructorDecl:
    name: str
    arg_types: tuple[str, ...] = ()


@dataclass(frozen=True)
class InductiveType:
    name: str
    constructors: tuple[ConstructorDecl, ...]


@dataclass(frozen=True)
class MatchBranch:
    con: str
    binders: tuple[str, ...]
    rhs: object  # Term


@dataclass(frozen=True)
class FixpointFn:
    name: str
    params: tuple[tuple[str, str], ...]  # (name, type)
    dec_index: int
    result_type: str
    branches: tuple[MatchBranch, ...]  # one per constructor, declared order


@dataclass(frozen=True)
class PredicateRule:
    name: str
    binders: tuple[tuple[str, str], ...]
    premises: tuple[object, ...]  # Formula
    conclusion: object  # Pred headed by the owning predicate

    def closed_formula(self):
        f = self.conclusion
        for p in reversed(self.premises):
            f = Implies(p, f)
        for v, ty in reversed(self.binders):
            f = Forall(v, ty, f)
        return f


@dataclass(frozen=True)
class InductivePredicate:
    name: str
    arg_types: tuple[str, ...]
    rules: tuple[PredicateRule, ...]


@dataclass(frozen=True)
class Notations:
    """Activated display/parse sugar; all three refer to declared names."""

    nil_con: str | None = None      # "[]"
    cons_con: str | None = None     # "::"
    append_fn: str | None = None    # "++"


@dataclass(frozen=True)
class Environment:
    types: dict = field(default_factory=dict)
    predicates: dict = field(default_factory=dict)
    fixpoints: dict = field(default_factory=dict)
    lemmas: dict = field(default_factory=dict)          # name -> Formula
    tactic_defs: dict = field(default_factory=dict)     # name -> TacticExpr
    notations: Notations = Notations()
    constructor_owner: dict = field(default_factory=dict)  # ctor -> type
    rule_owner: dict = field(default_factory=dict)         # rule -> predicate

    # -- lookups ---------------------------------------------------------
    def has_type(self, name):
        return name in self.types or name in self.predicates

    def constructor(self, name) -> tuple[str, ConstructorDecl] | None:
        owner = self.constructor_owner.get(name)
        if owner is None:
            return None
        ty = self.types[owner]
        for c in ty.constructors:
            if c.name == name:
                return owner, c
        return None

    def predicate_rule(self, name) -> tuple[str, PredicateRule] | None:
        owner = self.rule_owner.get(name)
        if owner is None:
            return None
        for r in self.predicates[owner].rules:
            if r.name == name:
                return owner, r
        return None

    def known_anywhere(self, name) -> bool:
        return (name in self.types or name in self.predicates
                or name in self.fixpoints or name in self.lemmas
                or name in self.tactic_defs or name in self.constructor_owner
                or name in self.rule_owner)


def infer_type(env: Environment, ctx: dict, t) -> str:
    """Type of a term under `ctx` (variable name -> type name)."""
    if isinstance(t, Var):
        ty = ctx.get(t.name)
        if ty is None:
            raise UnknownReference(f"unbound variable {t.name}")
        return ty
    if isinstance(t, Con):
        found = env.constructor(t.name)
        if found is None:
            raise UnknownReference(f"unknown constructor {t.name}")
        owner, decl = found
        if len(t.args) != len(decl.arg_types):
            raise ArityMismatch(
                f"{t.name} expects {len(decl.arg_types)} args, got {len(t.args)}")
        for a, ety in zip(t.args, decl.arg_types):
            aty = infer_type(env, ctx, a)
            if aty != ety:
                raise IllTyped(f"argument of {t.name}: expected {ety}, got {aty}")
        return owner
    if isinstance(t, App):
        fp = env.fixpoints.get(t.name)
        if fp is None:
            raise UnknownReference(f"unknown function {t.name}")
        if len(t.args) != len(fp.params):
            raise ArityMismatch(
                f"{t.name} expects {len(fp.params)} args, got {len(t.args)}")
        for a, (_, ety) in zip(t.args, fp.params):
            aty = infer_type(env, ctx, a)
            if aty != ety:
                raise IllTyped(f"argument of {t.name}: expected {ety}, got {aty}")
        return fp.result_type
    raise IllTyped(f"not a term: {t!r}")


def check_formula(env: Environment, ctx: dict, f) -> None:
    """Well-typedness of a formula; bound variables shadow."""
    if isinstance(f, Eq):
        if not env.has_type(f.ty) or f.ty in env.predicates:
            raise IllTyped(f"equation at non-type {f.ty}")
        lt = infer_type(env, ctx, f.lhs)
        rt = infer_type(env, ctx, f.rhs)
        if lt != f.ty or rt != f.ty:
            raise IllTyped(f"equation at {f.ty} between {lt} and {rt}")
    elif isinstance(f, Pred):
        pred = env.predicates.get(f.name)
        if pred is None:
            raise UnknownReference(f"unknown predicate {f.name}")
        if len(f.args) != len(pred.arg_types):
            raise ArityMismatch(f"{f.name} expects {len(pred.arg_types)} args")
        for a, ety in zip(f.args, pred.arg_types):
            aty = infer_type(env, ctx, a)
            if aty != ety:
                raise IllTyped(f"argument of {f.name}: expected {ety}, got {aty}")
    elif isinstance(f, Implies):
        check_formula(env, ctx, f.antecedent)
        check_formula(env, ctx, f.consequent)
    elif isinstance(f, Forall):
        if f.ty not in env.types:
            raise IllTyped(f"quantification over unknown type {f.ty}")
        check_formula(env, {**ctx, f.var: f.ty}, f.body)
    else:
        raise IllTyped(f"not a formula: {f!r}")


def _fresh_check(env: Environment, namespace: dict, name: str, what: str):
    check_name(name)
    if name in namespace:
        raise DuplicateName(f"{what} {name} already declared")


def _check_inductive(env: Environment, decl: InductiveType):
    _fresh_check(env, {**env.types, **env.predicates}, decl.name, "type")
    if not decl.constructors:
        raise IllTyped(f"type {decl.name} needs at least one constructor")
    seen = set()
    has_base = False
    for c in decl.constructors:
        check_name(c.name)
        if c.name in env.constructor_owner or c.name in env.rule_owner or c.name in seen:
            raise DuplicateName(f"constructor {c.name} already declared")
        seen.add(c.name)
        for ty in c.arg_types:
            if ty != decl.name and ty not in env.types:
                raise UnknownReference(f"constructor {c.name}: unknown type {ty}")
        if decl.name not in c.arg_types:
            has_base = True
    if not has_base:
        raise IllTyped(f"type {decl.name} has no non-recursive constructor")


def _check_predicate(env: Environment, decl: InductivePredicate):
    _fresh_check(env, {**env.types, **env.predicates}, decl.name, "predicate")
    for ty in decl.arg_types:
        if ty not in env.types:
            raise UnknownReference(f"predicate {decl.name}: unknown type {ty}")
    # rules reference the predicate being declared
    env2 = replace(env, predicates={**env.predicates, decl.name: decl})
    seen = set()
    for r in decl.rules:
        check_name(r.name)
        if r.name in env.constructor_owner or r.name in env.rule_owner or r.name in seen:
            raise DuplicateName(f"rule {r.name} already declared")
        seen.add(r.name)
        ctx = {}
        for v, ty in r.binders:
            check_name(v)
            if ty not in env.types:
                raise UnknownReference(f"rule {r.name}: unknown type {ty}")
            ctx[v] = ty
        for p in r.premises:
            check_formula(env2, ctx, p)
        if not isinstance(r.conclusion, Pred) or r.conclusion.name != decl.name:
            raise IllTyped(f"rule {r.name} must conclude {decl.name}")
        check_formula(env2, ctx, r.conclusion)
        free = formula_free_vars(r.closed_formula())
        if free:
            raise IllTyped(f"rule {r.name} not universally closed: {sorted(free)}")


def _check_fixpoint(env: Environment, decl: FixpointFn):
    _fresh_check(env, env.fixpoints, decl.name, "function")
    names = [n for n, _ in decl.params]
    if len(set(names)) != len(names):
        raise IllTyped(f"{decl.name}: duplicate parameter names")
    for n, ty in decl.params:
        check_name(n)
        if ty not in env.types:
            raise UnknownReference(f"{decl.name}: unknown parameter type {ty}")
    if not (0 <= decl.dec_index < len(decl.params)):
        raise IllTyped(f"{decl.name}: bad decreasing index")
    dec_name, dec_ty = decl.params[decl.dec_index]
    ind = env.types[dec_ty]
    if decl.result_type not in env.types:
        raise UnknownReference(f"{decl.name}: unknown result type {decl.result_type}")
    if [b.con for b in decl.branches] != [c.name for c in ind.constructors]:
        raise IllTyped(f"{decl.name}: match must cover {dec_ty}'s constructors in order")

    env2 = replace(env, fixpoints={**env.fixpoints, decl.name: decl})

    def check_descent(t, branch_binders):
        # every recursive call must pass a binder of the current branch
        # (a strict subterm of the matched value) at the decreasing index
        if isinstance(t, (Con, App)):
            if isinstance(t, App) and t.name == decl.name:
                arg = t.args[decl.dec_index] if decl.dec_index < len(t.args) else None
                if not (isinstance(arg, Var) and arg.name in branch_binders):
                    raise TerminationCheckFailure(
                        f"{decl.name}: recursive call does not decrease structurally")
            for a in t.args:
                check_descent(a, branch_binders)

    for branch, ctor in zip(decl.branches, ind.constructors):
        if len(branch.binders) != len(ctor.arg_types):
            raise ArityMismatch(f"{decl.name}: branch {branch.con} arity")
        if len(set(branch.binders)) != len(branch.binders):
            raise IllTyped(f"{decl.name}: duplicate binders in branch {branch.con}")
        ctx = dict(decl.params)
        for b, bty in zip(branch.binders, ctor.arg_types):
            check_name(b)
            if b in ctx:
                raise IllTyped(f"{decl.name}: binder {b} shadows a parameter")
            ctx[b] = bty
        check_descent(branch.rhs, set(branch.binders))
        rty = infer_type(env2, ctx, branch.rhs)
        if rty != decl.result_type:
            raise IllTyped(
                f"{decl.name}: branch {branch.con} has type {rty}, "
                f"expected {decl.result_type}")


def declare(env: Environment, decl) -> Environment:
    """Extend the environment with one declaration; returns a new value.

    Accepts InductiveType, InductivePredicate, FixpointFn, or a lemma as a
    ("lemma", name, formula) triple.
    """
    if isinstance(decl, InductiveType):
        _check_inductive(env, decl)
        owners = {**env.constructor_owner,
                  **{c.name: decl.name for c in decl.constructors}}
        return replace(env, types={**env.types, decl.name: decl},
                       constructor_owner=owners)
    if isinstance(decl, InductivePredicate):
        _check_predicate(env, decl)
        owners = {**env.rule_owner, **{r.name: decl.name for r in decl.rules}}
        return replace(env, predicates={**env.predicates, decl.name: decl},
                       rule_owner=owners)
    if isinstance(decl, FixpointFn):
        _check_fixpoint(env, decl)
        return replace(env, fixpoints={**env.fixpoints, decl.name: decl})
    if isinstance(decl, tuple) and len(decl) == 3 and decl[0] == "lemma":
        _, name, formula = decl
        _fresh_check(env, env.lemmas, name, "lemma")
        check_formula(env, {}, formula)
        if formula_free_vars(formula):
            raise IllTyped(f"lemma {name} has free variables")
        return replace(env, lemmas={**env.lemmas, name: formula})
    raise IllTyped(f"cannot declare {decl!r}")


def declare_tactic(env: Environment, name: str, body) -> Environment:
    _fresh_check(env, env.tactic_defs, name, "tactic")
    return replace(env, tactic_defs={**env.tactic_defs, name: body})


def set_notation(env: Environment, symbol: str, target: str) -> Environment:
    """Activate one of the three fixed notations: [], :: or ++."""
    if symbol == "[]":
        found = env.constructor(target)
        if found is None or found[1].arg_types:
            raise IllTyped(f"[] notation needs a 0-ary constructor, got {target}")
        return replace(env, notations=replace(env.notations, nil_con=target))
    if symbol == "::":
        found = env.constructor(target)
        if found is None or len(found[1].arg_types) != 2:
            raise IllTyped(f":: notation needs a 2-ary constructor, got {target}")
        return replace(env, notations=replace(env.notations, cons_con=target))
    if symbol == "++":
        fp = env.fixpoints.get(target)
        if fp is None or len(fp.params) != 2:
            raise IllTyped(f"++ notation needs a 2-ary function, got {target}")
        return replace(env, notations=replace(env.notations, append_fn=target))
    raise IllTyped(f"unsupported notation {symbol!r}")


def spine(formula):
    """Decompose leading quantifiers and implications.

    Returns (binders, premises, head): the universal prefix, the chain of
    antecedents that follows it, and the remaining head formula.
    """
    binders = []
    while isinstance(formula, Forall):
        binders.append((formula.var, formula.ty))
        formula = formula.body
    premises = []
    while isinstance(formula, Implies):
        premises.append(formula.antecedent)
        formula = formula.consequent
    return tuple(binders), tuple(premises), formula


def fixpoint_equation(env: Environment, fix_name: str, con_name: str):
    """The defining equation of one fixpoint branch.

    Returns (binders, Eq) where binders covers the non-decreasing
    parameters and the branch's pattern variables. These equations justify
    normalization steps inside derivations.
    """
    fp = env.fixpoints.get(fix_name)
    if fp is None:
        raise UnknownReference(f"unknown function {fix_name}")
    ctor = None
    branch = None
    owner_ty = env.types[fp.params[fp.dec_index][1]]
    for b, c in zip(fp.branches, owner_ty.constructors):
        if b.con == con_name:
            branch, ctor = b, c
            break
    if branch is None:
        raise UnknownReference(f"{fix_name} has no branch for {con_name}")
    binders = []
    lhs_args = []
    for i, (pname, pty) in enumerate(fp.params):
        if i == fp.dec_index:
            lhs_args.append(Con(con_name, tuple(Var(b) for b in branch.binders)))
        else:
            binders.append((pname, pty))
            lhs_args.append(Var(pname))
    for b, bty in zip(branch.binders, ctor.arg_types):
        binders.append((b, bty))
    return tuple(binders), Eq(App(fix_name, tuple(lhs_args)), branch.rhs, fp.result_type)
