"""The backtracking tactic interpreter.

`execute` turns a tactic expression into a lazy, deterministic stream of
successes. Each success carries the remaining goals, a builder that
assembles a kernel derivation once sub-derivations for those goals are
known, and the tactic records produced under the decomposition rule:
`;`-chains are split into their constituents, the winning branch of `+`
is decomposed recursively, and solve/repeat/match goal/named calls are
recorded as single opaque units.

Fuel bounds recursion depth: each named-tactic call and each `repeat`
iteration consumes one unit along its own path, so alternatives do not
steal fuel from each other and outcomes satisfy the backtracking laws.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator

from ..errors import FuelExhausted, UnknownReference
from ..kernel.decls import Environment, infer_type, spine
from ..kernel.derivation import Derivation, FormHyp, Judgment, TypeHyp
from ..kernel.matching import match_first_order
from ..kernel.normalize import normalize, normalize_formula_steps
from ..kernel.terms import (App, Con, Eq, Forall, Implies, Var, all_names,
                            replace_at, subst_formula, subst_term)
from ..syntax.printer import print_formula
from . import tactics as T
from .state import fresh_variant, taken_names
from .tactics import print_tactic

DEFAULT_FUEL = 1000
AUTO_DEPTH = 5


@dataclass(frozen=True)
class TacticRecord:
    """One database row: state before, the tactic, states after."""

    before: Judgment
    tactic: object
    printed: str
    after: tuple  # of Judgment


@dataclass(frozen=True)
class Success:
    goals: tuple  # of Judgment
    build: Callable  # list[Derivation] -> Derivation
    records: tuple  # of TacticRecord


ExecutionOutcome = Iterator[Success]


def execute(env: Environment, state: Judgment, t, fuel: int = DEFAULT_FUEL
            ) -> ExecutionOutcome:
    """All successes of `t` on `state`, lazily, in deterministic order."""
    if isinstance(t, T.Seq):
        for sa in execute(env, state, t.first, fuel):
            yield from _continue_on_goals(env, sa, t.second, fuel)
    elif isinstance(t, T.Alt):
        yield from execute(env, state, t.left, fuel)
        yield from execute(env, state, t.right, fuel)
    elif isinstance(t, T.Solve):
        for s in execute(env, state, t.inner, fuel):
            if not s.goals:
                yield _opaque(env, state, t, s)
    elif isinstance(t, T.Repeat):
        yield _opaque(env, state, t, _repeat_once(env, state, t.inner, fuel))
    elif isinstance(t, T.Call):
        body = env.tactic_defs.get(t.name)
        if body is None:
            raise UnknownReference(f"unknown tactic {t.name}")
        if fuel <= 0:
            raise FuelExhausted(t.name)
        for s in execute(env, state, body, fuel - 1):
            yield _opaque(env, state, t, s)
    elif isinstance(t, T.MatchGoal):
        yield from _exec_match_goal(env, state, t, fuel)
    elif isinstance(t, T.Fail):
        return
    elif isinstance(t, T.SearchFailing):
        raise UnknownReference("search failing is a document command, not a tactic")
    else:
        s = _exec_atomic(env, state, t)
        if s is not None:
            yield s


def first_success(env, state, t, fuel: int = DEFAULT_FUEL) -> Success | None:
    return next(execute(env, state, t, fuel), None)


def decompose_and_record(t, success: Success) -> tuple:
    """Records of one success, per the decomposition rule."""
    return success.records


def _continue_on_goals(env, sa: Success, b, fuel):
    """Apply b to every goal of sa, multiplying alternatives."""
    def combos(i):
        if i == len(sa.goals):
            yield ()
            return
        for s in execute(env, sa.goals[i], b, fuel):
            for rest in combos(i + 1):
                yield (s,) + rest

    for combo in combos(0):
        goals = tuple(g for s in combo for g in s.goals)
        records = sa.records + tuple(r for s in combo for r in s.records)

        def build(ds, combo=combo):
            parts, k = [], 0
            for s in combo:
                n = len(s.goals)
                parts.append(s.build(ds[k:k + n]))
                k += n
            return sa.build(parts)

        yield Success(goals, build, records)


def _opaque(env, state, t, s: Success) -> Success:
    record = TacticRecord(state, t, print_tactic(t, env), s.goals)
    return Success(s.goals, s.build, (record,))


def _identity_success(state: Judgment) -> Success:
    return Success((state,), lambda ds: ds[0], ())


def _repeat_once(env, state, inner, fuel) -> Success:
    if fuel <= 0:
        raise FuelExhausted("repeat")
    first = next(execute(env, state, inner, fuel), None)
    if first is None:
        return _identity_success(state)
    subs = [_repeat_once(env, g, inner, fuel - 1) for g in first.goals]
    goals = tuple(g for s in subs for g in s.goals)

    def build(ds):
        parts, k = [], 0
        for s in subs:
            n = len(s.goals)
            parts.append(s.build(ds[k:k + n]))
            k += n
        return first.build(parts)

    return Success(goals, build, ())


def _exec_match_goal(env, state, t: T.MatchGoal, fuel):
    for pattern, body in t.arms:
        if match_first_order(pattern, state.goal) is None:
            continue
        s = next(execute(env, state, body, fuel), None)
        if s is not None:
            # commit to the first successful arm
            yield _opaque(env, state, t, s)
            return
        # arm matched but its body failed: fall through to later arms


# ---------------------------------------------------------------------------
# atomic tactics

def _exec_atomic(env, state, t) -> Success | None:
    handler = _ATOMICS.get(type(t))
    if handler is None:
        raise UnknownReference(f"not a tactic: {t!r}")
    result = handler(env, state, t)
    if result is None:
        return None
    goals, build = result
    record = TacticRecord(state, t, print_tactic(t, env), tuple(goals))
    return Success(tuple(goals), build, (record,))


def _intro_step(env, state, name=None):
    """(new_judgment, builder) or None; shared by intro and intros."""
    goal = state.goal
    taken = taken_names(state)
    if isinstance(goal, Forall):
        # the binder being consumed is not a collision: its occurrences are
        # exactly what the substitution replaces
        taken = taken_names(Judgment(state.hyps, goal.body)) - {goal.var}
        taken |= set(state.hyp_ids())
        if name is not None:
            if name in taken:
                return None
            chosen = name
        else:
            chosen = fresh_variant(goal.var, taken)
        try:
            body = subst_formula(goal.body, {goal.var: Var(chosen)})
        except Exception:
            return None
        new = Judgment(state.hyps + ((chosen, TypeHyp(goal.ty)),), body)
        return new, (lambda ds: Derivation("forall_intro", state, (ds[0],)))
    if isinstance(goal, Implies):
        chosen = name if name is not None else fresh_variant("H", taken)
        if chosen in taken:
            return None
        new = Judgment(state.hyps + ((chosen, FormHyp(goal.antecedent)),),
                       goal.consequent)
        return new, (lambda ds: Derivation("implies_intro", state, (ds[0],)))
    return None


def _tac_intro(env, state, t: T.Intro):
    step = _intro_step(env, state, t.name)
    if step is None:
        return None
    new, build = step
    return [new], build


def _tac_intros(env, state, t):
    builders = []
    cur = state
    while True:
        step = _intro_step(env, cur, None)
        if step is None:
            break
        cur, build = step
        builders.append(build)
    if not builders:
        return None

    def build_all(ds):
        d = ds[0]
        for b in reversed(builders):
            d = b([d])
        return d

    return [cur], build_all


def _resolve_fact(env, state, name):
    """('hyp'|'lemma'|'rule', formula) or None; raises if name is unknown."""
    item = state.lookup(name)
    if isinstance(item, FormHyp):
        return "hyp", item.formula
    if isinstance(item, TypeHyp):
        return None
    if name in env.lemmas:
        return "lemma", env.lemmas[name]
    found = env.predicate_rule(name)
    if found is not None:
        return "rule", found[1].closed_formula()
    if env.known_anywhere(name):
        return None
    raise UnknownReference(f"unknown reference {name}")


def _use_node(kind, name, state, inst=None, premises=()):
    if kind == "hyp" and not inst and not premises:
        return Derivation("hypothesis", state, (), {}, {"hyp": name})
    if kind == "rule":
        return Derivation("rule", state, tuple(premises), dict(inst or {}),
                          {"ref": name})
    return Derivation("lemma", state, tuple(premises), dict(inst or {}),
                      {"ref": (kind, name)})


def _match_spine(env, state, formula):
    """(inst, instantiated premises) matching the goal, or None."""
    binders, prems, head = spine(formula)
    if not binders and not prems:
        return None
    pv = {n: f"_pv{i}" for i, (n, _) in enumerate(binders)}
    renaming = {n: Var(v) for n, v in pv.items()}
    head_r = subst_formula(head, renaming)
    fixed = all_names(head_r) - set(pv.values())
    subst = match_first_order(head_r, state.goal, frozenset(fixed))
    if subst is None or set(subst) != set(pv.values()):
        return None
    inst = {n: subst[v] for n, v in pv.items()}
    ctx = state.typing_ctx()
    try:
        for n, ty in binders:
            if infer_type(env, ctx, inst[n]) != ty:
                return None
    except Exception:
        return None
    return inst, [subst_formula(p, inst) for p in prems]


def _tac_apply(env, state, t: T.Apply):
    fact = _resolve_fact(env, state, t.ref)
    if fact is None:
        return None
    kind, formula = fact
    if formula == state.goal:
        return [], (lambda ds: _use_node(kind, t.ref, state))
    matched = _match_spine(env, state, formula)
    if matched is None:
        return None
    inst, prems = matched
    goals = [Judgment(state.hyps, p) for p in prems]
    return goals, (lambda ds: _use_node(kind, t.ref, state, inst, ds))


def _tac_exact(env, state, t: T.Exact):
    fact = _resolve_fact(env, state, t.ref)
    if fact is None or fact[1] != state.goal:
        return None
    return [], (lambda ds: _use_node(fact[0], t.ref, state))


def _tac_assumption(env, state, t):
    for h, item in state.hyps:
        if isinstance(item, FormHyp) and item.formula == state.goal:
            return [], (lambda ds, h=h: Derivation(
                "hypothesis", state, (), {}, {"hyp": h}))
    return None


def _tac_reflexivity(env, state, t):
    goal = state.goal
    if not isinstance(goal, Eq):
        return None
    if normalize(env, goal.lhs) != normalize(env, goal.rhs):
        return None
    return [], (lambda ds: Derivation("refl", state))


def _tac_symmetry(env, state, t):
    goal = state.goal
    if not isinstance(goal, Eq):
        return None
    new = Judgment(state.hyps, Eq(goal.rhs, goal.lhs, goal.ty))
    return [new], (lambda ds: Derivation("symmetry", state, (ds[0],)))


def _tac_f_equal(env, state, t):
    goal = state.goal
    if not isinstance(goal, Eq):
        return None
    l, r = goal.lhs, goal.rhs
    if type(l) is not type(r) or not isinstance(l, (Con, App)) \
            or l.name != r.name or len(l.args) != len(r.args):
        return None
    if isinstance(l, Con):
        arg_types = env.constructor(l.name)[1].arg_types
    else:
        arg_types = tuple(ty for _, ty in env.fixpoints[l.name].params)
    slots = []   # None -> premade refl, int -> index into emitted goals
    goals = []
    premade = []
    for la, ra, ty in zip(l.args, r.args, arg_types):
        subgoal = Judgment(state.hyps, Eq(la, ra, ty))
        if normalize(env, la) == normalize(env, ra):
            premade.append(Derivation("refl", subgoal))
            slots.append(None)
        else:
            slots.append(len(goals))
            goals.append(subgoal)

    def build(ds):
        prem_iter = iter(premade)
        premises = tuple(next(prem_iter) if s is None else ds[s] for s in slots)
        return Derivation("congruence", state, premises)

    return goals, build


def _tac_simpl(env, state, t):
    new_formula, steps = normalize_formula_steps(env, state.goal)
    if not steps:
        return None
    new = Judgment(state.hyps, new_formula)

    def build(ds):
        d = ds[0]
        for path, fix, con, inst, before in reversed(steps):
            d = Derivation("rewrite", Judgment(state.hyps, before), (d,),
                           dict(inst),
                           {"dir": "lr", "ref": ("fixeq", fix, con),
                            "path": tuple(path)})
        return d

    return [new], build


def _term_positions(x, path=()):
    """Pre-order positions of term nodes inside a formula."""
    from ..kernel.terms import is_term, node_children

    if is_term(x):
        yield path, x
    for i, child in enumerate(node_children(x)):
        yield from _term_positions(child, path + (i,))


def _tac_rewrite(env, state, t: T.Rewrite):
    fact = _resolve_fact(env, state, t.ref)
    if fact is None or fact[0] == "rule":
        return None
    kind, formula = fact
    binders, prems, head = spine(formula)
    if prems or not isinstance(head, Eq):
        return None
    src, dst = (head.rhs, head.lhs) if t.reverse else (head.lhs, head.rhs)
    pv = {n: f"_pv{i}" for i, (n, _) in enumerate(binders)}
    renaming = {n: Var(v) for n, v in pv.items()}
    src_r = subst_term(src, renaming)
    fixed = frozenset(all_names(src_r) - set(pv.values()))
    for path, sub in _term_positions(state.goal):
        subst = match_first_order(src_r, sub, fixed)
        if subst is not None and set(subst) == set(pv.values()):
            inst = {n: subst[v] for n, v in pv.items()}
            new_goal = replace_at(state.goal, path, subst_term(dst, inst))
            new = Judgment(state.hyps, new_goal)
            node_params = {"dir": "rl" if t.reverse else "lr",
                           "ref": (kind, t.ref), "path": path}
            return [new], (lambda ds, inst=inst, params=node_params:
                           Derivation("rewrite", state, (ds[0],), inst, params))
    return None


def _case_split(env, state, var, with_ih):
    item = state.lookup(var)
    if not isinstance(item, TypeHyp):
        return None
    ind = env.types.get(item.ty)
    if ind is None:
        return None
    from ..kernel.terms import formula_free_vars

    for h, other in state.hyps:
        if h != var and isinstance(other, FormHyp) \
                and var in formula_free_vars(other.formula):
            return None  # would leave a dangling reference in the context
    idx = state.hyp_ids().index(var)
    prefix = state.hyps[:idx] + state.hyps[idx + 1:]
    goal = state.goal
    base_taken = {h for h, _ in prefix} | all_names(goal)
    goals = []
    for ctor in ind.constructors:
        taken = set(base_taken)
        binders = []
        reused = False
        for bty in ctor.arg_types:
            if bty == item.ty and not reused:
                # the recursive argument inherits the induction variable's name
                name = fresh_variant(var, taken - {var})
                reused = True
            else:
                name = fresh_variant(bty[0], taken)
            taken.add(name)
            binders.append((name, bty))
        entries = list(prefix) + [(n, TypeHyp(ty)) for n, ty in binders]
        if with_ih:
            for bname, bty in binders:
                if bty == item.ty:
                    ih = fresh_variant(f"IH{bname}", taken)
                    taken.add(ih)
                    entries.append((ih, FormHyp(subst_formula(goal, {var: Var(bname)}))))
        instance = Con(ctor.name, tuple(Var(n) for n, _ in binders))
        goals.append(Judgment(tuple(entries), subst_formula(goal, {var: instance})))
    rule = "induction" if with_ih else "case"
    return goals, (lambda ds: Derivation(rule, state, tuple(ds), {}, {"var": var}))


def _tac_induction(env, state, t: T.Induction):
    return _case_split(env, state, t.var, with_ih=True)


def _tac_destruct(env, state, t: T.Destruct):
    return _case_split(env, state, t.var, with_ih=False)


def _auto_solve(env, state, depth) -> Derivation | None:
    """Backward chaining over assumption, reflexivity and hypothesis apply."""
    for h, item in state.hyps:
        if isinstance(item, FormHyp) and item.formula == state.goal:
            return Derivation("hypothesis", state, (), {}, {"hyp": h})
    if isinstance(state.goal, Eq) and \
            normalize(env, state.goal.lhs) == normalize(env, state.goal.rhs):
        return Derivation("refl", state)
    if depth <= 0:
        return None
    for h, item in state.hyps:
        if not isinstance(item, FormHyp):
            continue
        matched = _match_spine(env, state, item.formula)
        if matched is None:
            continue
        inst, prems = matched
        subds = []
        for p in prems:
            d = _auto_solve(env, Judgment(state.hyps, p), depth - 1)
            if d is None:
                break
            subds.append(d)
        else:
            return _use_node("hyp", h, state, inst, subds)
    return None


def _tac_auto(env, state, t):
    d = _auto_solve(env, state, AUTO_DEPTH)
    if d is None:
        return None
    return [], (lambda ds: d)


_ATOMICS = {
    T.Intro: _tac_intro,
    T.Intros: _tac_intros,
    T.Apply: _tac_apply,
    T.Rewrite: _tac_rewrite,
    T.Reflexivity: _tac_reflexivity,
    T.Symmetry: _tac_symmetry,
    T.Assumption: _tac_assumption,
    T.FEqual: _tac_f_equal,
    T.Simpl: _tac_simpl,
    T.Induction: _tac_induction,
    T.Destruct: _tac_destruct,
    T.Auto: _tac_auto,
    T.Exact: _tac_exact,
}
