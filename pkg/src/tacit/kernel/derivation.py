"""Derivations and their independent checker.

A Derivation is a tree of primitive inference steps over judgments
(context + goal). The checker validates every node against its rule
schema using purely syntactic comparisons, with no reference to the
tactic engine; it plays the role the proof assistant's kernel plays for
proofs found by automation. The primitive rules:

    forall_intro, implies_intro, hypothesis, lemma (with instantiation,
    covering context hypotheses used as conditional facts), rule
    (predicate-rule use with instantiation), refl (equality after
    normalization), symmetry, congruence, rewrite (with an equation,
    including fixpoint defining equations), induction, case.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import KernelError
from .decls import Environment, check_formula, fixpoint_equation, infer_type, spine
from .matching import match_first_order
from .normalize import normalize
from .terms import (App, Con, Eq, Forall, Implies, Pred, Var, binders_along,
                    formula_free_vars, replace_at, subst_formula, subst_term,
                    subtree_at)


@dataclass(frozen=True)
class TypeHyp:
    ty: str


@dataclass(frozen=True)
class FormHyp:
    formula: object


@dataclass(frozen=True)
class Judgment:
    """Named hypotheses plus a goal formula."""

    hyps: tuple = ()  # tuple of (id, TypeHyp | FormHyp)
    goal: object = None

    def hyp_ids(self):
        return [h for h, _ in self.hyps]

    def lookup(self, name):
        for h, item in self.hyps:
            if h == name:
                return item
        return None

    def typing_ctx(self) -> dict:
        return {h: item.ty for h, item in self.hyps if isinstance(item, TypeHyp)}


@dataclass(frozen=True)
class Derivation:
    rule: str
    conclusion: Judgment
    premises: tuple = ()
    inst: dict = field(default_factory=dict)   # Name -> Term
    params: dict = field(default_factory=dict)  # rule-specific data


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    reason: str | None = None
    path: tuple = ()

    def __bool__(self):
        return self.ok


class _Reject(Exception):
    def __init__(self, reason, path):
        self.reason = reason
        self.path = path


def check_derivation(env: Environment, d: Derivation) -> CheckResult:
    """ok iff every node instantiates its rule schema correctly."""
    try:
        _check(env, d, ())
        return CheckResult(True)
    except _Reject as r:
        return CheckResult(False, r.reason, r.path)


def _fail(reason, path):
    raise _Reject(reason, path)


def _well_formed(env, j: Judgment, path):
    ids = j.hyp_ids()
    if len(set(ids)) != len(ids):
        _fail("duplicate-hypothesis-ids", path)
    ctx = j.typing_ctx()
    try:
        for h, item in j.hyps:
            if isinstance(item, TypeHyp):
                if item.ty not in env.types:
                    _fail("unknown-hypothesis-type", path)
            else:
                check_formula(env, ctx, item.formula)
        check_formula(env, ctx, j.goal)
    except KernelError as exc:
        _fail(f"ill-typed-judgment: {exc}", path)


def _check(env, d: Derivation, path):
    if not isinstance(d, Derivation):
        _fail("not-a-derivation", path)
    _well_formed(env, d.conclusion, path)
    handler = _RULES.get(d.rule)
    if handler is None:
        _fail(f"unknown-rule: {d.rule}", path)
    handler(env, d, path)
    for i, p in enumerate(d.premises):
        _check(env, p, path + (i,))


def _expect_premises(d, n, path):
    if len(d.premises) != n:
        _fail("missing-case" if len(d.premises) < n else "extra-premises", path)


def _premise_hyps_equal(d, i, hyps, path):
    if d.premises[i].conclusion.hyps != hyps:
        _fail("premise-context-mismatch", path)


def _check_forall_intro(env, d, path):
    goal = d.conclusion.goal
    if not isinstance(goal, Forall):
        _fail("not-a-universal", path)
    _expect_premises(d, 1, path)
    prem = d.premises[0].conclusion
    if len(prem.hyps) != len(d.conclusion.hyps) + 1:
        _fail("premise-context-mismatch", path)
    if prem.hyps[:-1] != d.conclusion.hyps:
        _fail("premise-context-mismatch", path)
    name, item = prem.hyps[-1]
    if not isinstance(item, TypeHyp) or item.ty != goal.ty:
        _fail("intro-type-mismatch", path)
    if name in d.conclusion.hyp_ids():
        _fail("intro-name-not-fresh", path)
    try:
        expected = subst_formula(goal.body, {goal.var: Var(name)})
    except KernelError:
        _fail("intro-capture", path)
    if prem.goal != expected:
        _fail("premise-goal-mismatch", path)


def _check_implies_intro(env, d, path):
    goal = d.conclusion.goal
    if not isinstance(goal, Implies):
        _fail("not-an-implication", path)
    _expect_premises(d, 1, path)
    prem = d.premises[0].conclusion
    if prem.hyps[:-1] != d.conclusion.hyps or len(prem.hyps) != len(d.conclusion.hyps) + 1:
        _fail("premise-context-mismatch", path)
    name, item = prem.hyps[-1]
    if not isinstance(item, FormHyp) or item.formula != goal.antecedent:
        _fail("intro-hypothesis-mismatch", path)
    if name in d.conclusion.hyp_ids():
        _fail("intro-name-not-fresh", path)
    if prem.goal != goal.consequent:
        _fail("premise-goal-mismatch", path)


def _check_hypothesis(env, d, path):
    _expect_premises(d, 0, path)
    item = d.conclusion.lookup(d.params.get("hyp"))
    if not isinstance(item, FormHyp) or item.formula != d.conclusion.goal:
        _fail("hypothesis-mismatch", path)


def _resolve_fact(env, j: Judgment, ref, path):
    kind, name = ref
    if kind == "hyp":
        item = j.lookup(name)
        if not isinstance(item, FormHyp):
            _fail("unknown-hypothesis", path)
        return item.formula
    if kind == "lemma":
        f = env.lemmas.get(name)
        if f is None:
            _fail("unknown-lemma", path)
        return f
    if kind == "rule":
        found = env.predicate_rule(name)
        if found is None:
            _fail("unknown-rule-reference", path)
        return found[1].closed_formula()
    _fail("bad-reference-kind", path)


def _check_instantiated_use(env, d, path, formula):
    goal = d.conclusion.goal
    if goal == formula and not d.inst and not d.premises:
        return  # whole-formula use
    binders, prems, head = spine(formula)
    names = [n for n, _ in binders]
    if set(d.inst) != set(names):
        _fail("instantiation-domain-mismatch", path)
    ctx = d.conclusion.typing_ctx()
    try:
        for n, ty in binders:
            if infer_type(env, ctx, d.inst[n]) != ty:
                _fail("instantiation-ill-typed", path)
    except KernelError:
        _fail("instantiation-ill-typed", path)
    if subst_formula(head, d.inst) != goal:
        _fail("conclusion-mismatch", path)
    _expect_premises(d, len(prems), path)
    for i, p in enumerate(prems):
        _premise_hyps_equal(d, i, d.conclusion.hyps, path)
        if d.premises[i].conclusion.goal != subst_formula(p, d.inst):
            _fail("premise-goal-mismatch", path)


def _check_lemma(env, d, path):
    ref = d.params.get("ref")
    if not (isinstance(ref, tuple) and len(ref) == 2 and ref[0] in ("hyp", "lemma")):
        _fail("bad-reference", path)
    _check_instantiated_use(env, d, path, _resolve_fact(env, d.conclusion, ref, path))


def _check_rule(env, d, path):
    name = d.params.get("ref")
    _check_instantiated_use(env, d, path,
                            _resolve_fact(env, d.conclusion, ("rule", name), path))


def _check_refl(env, d, path):
    _expect_premises(d, 0, path)
    goal = d.conclusion.goal
    if not isinstance(goal, Eq):
        _fail("not-an-equation", path)
    if normalize(env, goal.lhs) != normalize(env, goal.rhs):
        _fail("normal-forms-differ", path)


def _check_symmetry(env, d, path):
    goal = d.conclusion.goal
    if not isinstance(goal, Eq):
        _fail("not-an-equation", path)
    _expect_premises(d, 1, path)
    _premise_hyps_equal(d, 0, d.conclusion.hyps, path)
    if d.premises[0].conclusion.goal != Eq(goal.rhs, goal.lhs, goal.ty):
        _fail("premise-goal-mismatch", path)


def _check_congruence(env, d, path):
    goal = d.conclusion.goal
    if not isinstance(goal, Eq):
        _fail("not-an-equation", path)
    l, r = goal.lhs, goal.rhs
    if type(l) is not type(r) or not isinstance(l, (Con, App)) or l.name != r.name:
        _fail("heads-differ", path)
    if len(l.args) != len(r.args):
        _fail("arity-mismatch", path)
    if isinstance(l, Con):
        found = env.constructor(l.name)
        if found is None or found[0] != goal.ty:
            _fail("head-type-mismatch", path)
        arg_types = found[1].arg_types
    else:
        fp = env.fixpoints.get(l.name)
        if fp is None or fp.result_type != goal.ty:
            _fail("head-type-mismatch", path)
        arg_types = tuple(ty for _, ty in fp.params)
    _expect_premises(d, len(arg_types), path)
    for i, ty in enumerate(arg_types):
        _premise_hyps_equal(d, i, d.conclusion.hyps, path)
        if d.premises[i].conclusion.goal != Eq(l.args[i], r.args[i], ty):
            _fail("premise-goal-mismatch", path)


def _resolve_equation(env, d, path):
    ref = d.params.get("ref")
    if isinstance(ref, tuple) and ref[0] == "fixeq":
        try:
            return fixpoint_equation(env, ref[1], ref[2])
        except KernelError:
            _fail("unknown-defining-equation", path)
    formula = _resolve_fact(env, d.conclusion, ref, path)
    binders, prems, head = spine(formula)
    if prems or not isinstance(head, Eq):
        _fail("not-a-rewritable-equation", path)
    return binders, head


def _check_rewrite(env, d, path):
    direction = d.params.get("dir")
    if direction not in ("lr", "rl"):
        _fail("bad-direction", path)
    binders, eq = _resolve_equation(env, d, path)
    src, dst = (eq.lhs, eq.rhs) if direction == "lr" else (eq.rhs, eq.lhs)
    names = [n for n, _ in binders]
    if set(d.inst) != set(names):
        _fail("instantiation-domain-mismatch", path)
    goal = d.conclusion.goal
    rpath = tuple(d.params.get("path", ()))
    target = subtree_at(goal, rpath)
    if target is None:
        _fail("bad-rewrite-path", path)
    # values may mention variables bound along the path into the goal
    ctx = d.conclusion.typing_ctx()
    ctx.update(dict(binders_along(goal, rpath)))
    try:
        for n, ty in binders:
            if infer_type(env, ctx, d.inst[n]) != ty:
                _fail("instantiation-ill-typed", path)
    except KernelError:
        _fail("instantiation-ill-typed", path)
    if subst_term(src, d.inst) != target:
        _fail("redex-mismatch", path)
    _expect_premises(d, 1, path)
    _premise_hyps_equal(d, 0, d.conclusion.hyps, path)
    expected = replace_at(goal, rpath, subst_term(dst, d.inst))
    if d.premises[0].conclusion.goal != expected:
        _fail("premise-goal-mismatch", path)


def _induction_schema(env, d, path, with_ih):
    var = d.params.get("var")
    hyps = d.conclusion.hyps
    idx = next((i for i, (h, _) in enumerate(hyps) if h == var), None)
    if idx is None or not isinstance(hyps[idx][1], TypeHyp):
        _fail("not-a-typed-variable", path)
    ty_name = hyps[idx][1].ty
    ind = env.types.get(ty_name)
    if ind is None:
        _fail("not-an-inductive-type", path)
    for h, item in hyps:
        if h != var and isinstance(item, FormHyp) and var in formula_free_vars(item.formula):
            _fail("variable-occurs-in-hypothesis", path)
    goal = d.conclusion.goal
    prefix = hyps[:idx] + hyps[idx + 1:]
    prefix_ids = {h for h, _ in prefix}
    goal_free = formula_free_vars(goal)
    _expect_premises(d, len(ind.constructors), path)
    for j, ctor in enumerate(ind.constructors):
        prem = d.premises[j].conclusion
        n_bind = len(ctor.arg_types)
        rec_positions = [k for k, t in enumerate(ctor.arg_types) if t == ty_name]
        n_ih = len(rec_positions) if with_ih else 0
        if len(prem.hyps) != len(prefix) + n_bind + n_ih:
            _fail("premise-context-mismatch", path)
        if prem.hyps[:len(prefix)] != prefix:
            _fail("premise-context-mismatch", path)
        extras = prem.hyps[len(prefix):]
        binder_names = []
        for (name, item), bty in zip(extras[:n_bind], ctor.arg_types):
            if not isinstance(item, TypeHyp) or item.ty != bty:
                _fail("case-binder-type-mismatch", path)
            if name in prefix_ids or name in binder_names:
                _fail("case-binder-not-fresh", path)
            if name in goal_free and name != var:
                _fail("case-binder-captures", path)
            binder_names.append(name)
        if with_ih:
            for (ih_name, item), pos in zip(extras[n_bind:], rec_positions):
                if not isinstance(item, FormHyp):
                    _fail("missing-induction-hypothesis", path)
                expected_ih = subst_formula(goal, {var: Var(binder_names[pos])})
                if item.formula != expected_ih:
                    _fail("induction-hypothesis-mismatch", path)
                if ih_name in prefix_ids or ih_name in binder_names:
                    _fail("case-binder-not-fresh", path)
        instance = Con(ctor.name, tuple(Var(b) for b in binder_names))
        if prem.goal != subst_formula(goal, {var: instance}):
            _fail("premise-goal-mismatch", path)


def _check_induction(env, d, path):
    _induction_schema(env, d, path, with_ih=True)


def _check_case(env, d, path):
    _induction_schema(env, d, path, with_ih=False)


_RULES = {
    "forall_intro": _check_forall_intro,
    "implies_intro": _check_implies_intro,
    "hypothesis": _check_hypothesis,
    "lemma": _check_lemma,
    "rule": _check_rule,
    "refl": _check_refl,
    "symmetry": _check_symmetry,
    "congruence": _check_congruence,
    "rewrite": _check_rewrite,
    "induction": _check_induction,
    "case": _check_case,
}
