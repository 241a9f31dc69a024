"""Derivation checker: engine agreement, schema rejections, mutations."""

import random
from dataclasses import replace

import pytest

from conftest import make_list_env, natlist, num
from tacit.engine import Judgment, execute, first_success, parse_tactic
from tacit.kernel import (Con, Derivation, Eq, Forall, App, Pred, TypeHyp, Var,
                          check_derivation)

CONCAT_NIL_R = Forall("ls", "list",
                      Eq(App("concat", (Var("ls"), Con("nil"))), Var("ls"), "list"))


def run_script(env, statement, script):
    goals = (Judgment((), statement),)
    build = lambda ds: ds[0]  # noqa: E731
    for cmd in script:
        s = first_success(env, goals[0], parse_tactic(cmd, env))
        assert s is not None, cmd
        n = len(s.goals)
        build = (lambda old, child, n: lambda ds: old([child(ds[:n])] + list(ds[n:])))(
            build, s.build, n)
        goals = s.goals + goals[1:]
    assert goals == ()
    return build([])


SCRIPT = ["intros", "induction ls", "simpl", "reflexivity", "simpl",
          "f_equal", "apply IHls"]


def test_engine_derivation_checks(list_env):
    d = run_script(list_env, CONCAT_NIL_R, SCRIPT)
    assert d.conclusion == Judgment((), CONCAT_NIL_R)
    assert check_derivation(list_env, d).ok


def test_reflexivity_rejects_distinct_constructors(list_env):
    bad = Derivation("refl", Judgment((), Eq(Con("nil"),
                                             Con("cons", (num(0), Con("nil"))),
                                             "list")))
    res = check_derivation(list_env, bad)
    assert not res.ok
    assert res.reason == "normal-forms-differ"


def test_induction_missing_case_rejected(list_env):
    d = run_script(list_env, CONCAT_NIL_R, SCRIPT)
    # drop one constructor case from the induction node (under intro)
    ind = d.premises[0]
    assert ind.rule == "induction"
    mutated = replace(d, premises=(replace(ind, premises=ind.premises[:1]),))
    res = check_derivation(list_env, mutated)
    assert not res.ok
    assert res.reason == "missing-case"
    assert res.path == (0,)


def _nodes(d, path=()):
    yield path, d
    for i, p in enumerate(d.premises):
        yield from _nodes(p, path + (i,))


def _mutate_at(d, path, new_node):
    if not path:
        return new_node
    i = path[0]
    prems = list(d.premises)
    prems[i] = _mutate_at(prems[i], path[1:], new_node)
    return replace(d, premises=tuple(prems))


def _mutate_conclusion(rng, node):
    """One random edit that changes the node's concluded judgment."""
    j = node.conclusion
    goal = j.goal
    choices = []
    if isinstance(goal, Eq):
        choices.append(lambda: replace(node, conclusion=Judgment(
            j.hyps, Eq(goal.rhs, goal.lhs, goal.ty))))
        choices.append(lambda: replace(node, conclusion=Judgment(
            j.hyps, Eq(goal.lhs, Con("cons", (num(7), goal.rhs)), goal.ty))))
    choices.append(lambda: replace(node, conclusion=Judgment(
        j.hyps + (("Zx", TypeHyp("nat")),), goal)))
    if j.hyps:
        choices.append(lambda: replace(node, conclusion=Judgment(j.hyps[:-1], goal)))
    return rng.choice(choices)()


def test_single_node_mutations_always_rejected(list_env):
    d = run_script(list_env, CONCAT_NIL_R, SCRIPT)
    rng = random.Random(7)
    all_nodes = list(_nodes(d))
    accepted = 0
    for _ in range(200):
        path, node = rng.choice(all_nodes)
        mutated_node = _mutate_conclusion(rng, node)
        if mutated_node.conclusion == node.conclusion:
            continue
        mutated = _mutate_at(d, path, mutated_node)
        ok = check_derivation(list_env, mutated).ok
        # a mutated root that still proves its own (different) statement
        # must at least not claim the original theorem
        if ok:
            assert mutated.conclusion != Judgment((), CONCAT_NIL_R)
            accepted += 1
    assert accepted == 0  # conclusion edits never slip through


def test_solve_sublist_derivation_checks(list_env):
    goal = Judgment((), Pred("sublist", (natlist(9, 3), natlist(4, 7, 9, 3))))
    s = first_success(list_env, goal, parse_tactic("solve_sublist", list_env))
    assert s is not None and s.goals == ()
    assert check_derivation(list_env, s.build([])).ok


def test_checker_rejects_unknown_rule(list_env):
    bogus = Derivation("fabricate", Judgment((), CONCAT_NIL_R))
    res = check_derivation(list_env, bogus)
    assert not res.ok and "unknown-rule" in res.reason


def test_checker_rejects_ill_typed_judgment(list_env):
    bogus = Derivation("refl", Judgment((), Eq(Var("zz"), Var("zz"), "nat")))
    res = check_derivation(list_env, bogus)
    assert not res.ok and "ill-typed" in res.reason
