"""Interpreter: atomic semantics, backtracking laws, records, fuel."""

import pytest
from hypothesis import given, settings, strategies as st

from conftest import make_list_env, natlist, num
from tacit.engine import (FormHyp, Judgment, TypeHyp, decompose_and_record,
                          execute, first_success, parse_tactic, print_tactic)
from tacit.engine import tactics as T
from tacit.errors import FuelExhausted, UnknownReference
from tacit.kernel import (App, Con, Eq, Forall, Implies, Pred, Var,
                          check_derivation, declare_tactic)

CONCAT_NIL_R = Forall("ls", "list",
                      Eq(App("concat", (Var("ls"), Con("nil"))), Var("ls"), "list"))


def goals_of(env, state, text, fuel=1000):
    s = first_success(env, state, parse_tactic(text, env), fuel)
    return None if s is None else s.goals


# -- atomics -----------------------------------------------------------------

def test_intros_universal(list_env):
    state = Judgment((), CONCAT_NIL_R)
    goals = goals_of(list_env, state, "intros")
    assert goals == (Judgment((("ls", TypeHyp("list")),),
                              Eq(App("concat", (Var("ls"), Con("nil"))),
                                 Var("ls"), "list")),)


def test_intro_names_hypotheses_like_proof_scripts(list_env):
    state = Judgment((), Forall("ls", "list", Forall(
        "ls", "list", Eq(Var("ls"), Var("ls"), "list"))))
    goals = goals_of(list_env, state, "intros")
    assert [h for h, _ in goals[0].hyps] == ["ls", "ls0"]


def test_intro_on_implication_uses_h_series(list_env):
    f = Implies(Pred("sublist", (Var("a"), Var("b"))),
                Pred("sublist", (Var("a"), Var("b"))))
    state = Judgment((("a", TypeHyp("list")), ("b", TypeHyp("list"))), f)
    goals = goals_of(list_env, state, "intro")
    assert goals[0].hyps[-1][0] == "H"
    assert goals_of(list_env, goals[0], "assumption") == ()


def test_induction_produces_paper_cases(list_env):
    state = Judgment((("ls", TypeHyp("list")),),
                     Eq(App("concat", (Var("ls"), Con("nil"))), Var("ls"), "list"))
    goals = goals_of(list_env, state, "induction ls")
    assert len(goals) == 2
    base, step = goals
    assert base.goal == Eq(App("concat", (Con("nil"), Con("nil"))), Con("nil"), "list")
    names = [h for h, _ in step.hyps]
    assert names == ["n", "ls", "IHls"]  # recursive binder reuses the name
    ih = step.hyps[-1][1].formula
    assert ih == Eq(App("concat", (Var("ls"), Con("nil"))), Var("ls"), "list")


def test_induction_blocked_when_hypothesis_mentions_var(list_env):
    state = Judgment(
        (("ls", TypeHyp("list")), ("H", FormHyp(Pred("sublist", (Var("ls"), Var("ls")))))),
        Pred("sublist", (Var("ls"), Var("ls"))))
    assert goals_of(list_env, state, "induction ls") is None


def test_f_equal_discharges_equal_args(list_env):
    state = Judgment(
        (("x", TypeHyp("nat")), ("a", TypeHyp("list")), ("b", TypeHyp("list"))),
        Eq(Con("cons", (Var("x"), Var("a"))), Con("cons", (Var("x"), Var("b"))), "list"))
    goals = goals_of(list_env, state, "f_equal")
    assert goals == (Judgment(state.hyps, Eq(Var("a"), Var("b"), "list")),)


def test_rewrite_leftmost_outermost(list_env):
    # goal: 1 :: 2 :: ls ++ [] = 1 :: 2 :: ls, rewrite with concat_nil_r
    from tacit.kernel import declare
    env = declare(list_env, ("lemma", "concat_nil_r", CONCAT_NIL_R))
    lhs = Con("cons", (num(1), Con("cons", (num(2), App("concat", (Var("ls"), Con("nil")))))))
    rhs = Con("cons", (num(1), Con("cons", (num(2), Var("ls")))))
    state = Judgment((("ls", TypeHyp("list")),), Eq(lhs, rhs, "list"))
    goals = goals_of(env, state, "rewrite concat_nil_r")
    assert goals == (Judgment(state.hyps, Eq(rhs, rhs, "list")),)
    assert goals_of(env, goals[0], "reflexivity") == ()


def test_rewrite_under_binders(list_env):
    from tacit.kernel import declare
    env = declare(list_env, ("lemma", "concat_nil_r", CONCAT_NIL_R))
    state = Judgment((), Forall("xs", "list",
                                Eq(App("concat", (Var("xs"), Con("nil"))),
                                   Var("xs"), "list")))
    goals = goals_of(env, state, "rewrite concat_nil_r")
    assert goals == (Judgment((), Forall("xs", "list",
                                         Eq(Var("xs"), Var("xs"), "list"))),)
    s = first_success(env, goals[0], parse_tactic("intros; reflexivity", env))
    assert s is not None and s.goals == ()
    # the composed derivation (rewrite under the binder) must check
    full = first_success(env, state,
                         parse_tactic("rewrite concat_nil_r; intros; reflexivity", env))
    assert check_derivation(env, full.build([])).ok


def test_simpl_fails_when_stuck(list_env):
    state = Judgment((("ls", TypeHyp("list")),),
                     Eq(App("concat", (Var("ls"), Con("nil"))), Var("ls"), "list"))
    assert goals_of(list_env, state, "simpl") is None


def test_exact_and_symmetry(list_env):
    eq = Eq(Var("a"), Var("b"), "list")
    state = Judgment((("a", TypeHyp("list")), ("b", TypeHyp("list")),
                      ("H", FormHyp(Eq(Var("b"), Var("a"), "list")))), eq)
    goals = goals_of(list_env, state, "symmetry")
    assert goals_of(list_env, goals[0], "exact H") == ()


def test_apply_unknown_reference_raises(list_env):
    state = Judgment((), CONCAT_NIL_R)
    with pytest.raises(UnknownReference):
        list(execute(list_env, state, parse_tactic("apply no_such_thing", list_env)))


# -- combinators -------------------------------------------------------------

def test_fail_absorbs(list_env):
    state = Judgment((), CONCAT_NIL_R)
    assert list(execute(list_env, state, T.Fail())) == []
    assert list(execute(list_env, state, T.Seq(T.Fail(), T.Intros()))) == []


def test_alt_skips_failing_branch(list_env):
    state = Judgment((("a", TypeHyp("nat")), ("b", TypeHyp("nat")),
                      ("H", FormHyp(Eq(Var("a"), Var("b"), "nat")))),
                     Eq(Var("a"), Var("b"), "nat"))
    succ = list(execute(list_env, state,
                        parse_tactic("reflexivity + assumption", list_env)))
    assert len(succ) == 1 and succ[0].goals == ()
    # single-record decomposition names the winning branch
    assert [r.printed for r in succ[0].records] == ["assumption"]


def test_backtracking_laws(list_env):
    state = Judgment((), Pred("sublist", (natlist(9), natlist(9, 1))))
    a = parse_tactic("apply sl_cons1", list_env)
    b = parse_tactic("apply sl_cons2", list_env)

    def outcomes(t):
        return [s.goals for s in execute(list_env, state, t)]

    assert outcomes(T.Alt(a, b)) == outcomes(a) + outcomes(b)
    assert outcomes(T.Seq(T.Fail(), a)) == []
    solve_outcomes = [s.goals for s in execute(list_env, state, T.Solve(T.Alt(a, b)))]
    assert all(g == () for g in solve_outcomes)
    assert all(g in outcomes(T.Alt(a, b)) for g in solve_outcomes)


def test_match_goal_falls_through_on_body_failure(list_env):
    state = Judgment(
        (("ls1", TypeHyp("list")), ("ls2", TypeHyp("list")),
         ("H", FormHyp(Pred("sublist", (Var("ls1"), Var("ls2")))))),
        Pred("sublist", (Var("ls1"), Var("ls2"))))
    # the sublist _ _ arm matches but its body fails on variable heads;
    # the catch-all auto arm then closes via the hypothesis
    s = first_success(list_env, state, parse_tactic("solve_sublist", list_env))
    assert s is not None and s.goals == ()
    assert check_derivation(list_env, s.build([])).ok


def test_call_solve_sublist_single_success(list_env):
    state = Judgment((), Pred("sublist", (natlist(9, 3), natlist(4, 7, 9, 3))))
    succ = list(execute(list_env, state, parse_tactic("solve_sublist", list_env)))
    assert [s.goals for s in succ] == [()]


def test_execute_replay_determinism(list_env):
    state = Judgment((), Pred("sublist", (natlist(9, 3), natlist(4, 7, 9, 3))))
    t = parse_tactic("solve_sublist", list_env)
    runs = [[(s.goals, [r.printed for r in s.records])
             for s in execute(list_env, state, t)] for _ in range(3)]
    assert runs[0] == runs[1] == runs[2]


def test_fuel_exhaustion_is_distinct(list_env):
    env = declare_tactic(list_env, "spin", parse_tactic("spin", list_env))
    state = Judgment((), CONCAT_NIL_R)
    with pytest.raises(FuelExhausted):
        list(execute(env, state, parse_tactic("spin", env), fuel=50))
    # repeat of an always-applicable tactic is also fuel-bounded
    eq_state = Judgment((("a", TypeHyp("nat")),), Eq(Var("a"), Var("a"), "nat"))
    with pytest.raises(FuelExhausted):
        list(execute(env, eq_state, parse_tactic("repeat symmetry", env), fuel=40))


def test_repeat_identity_when_inapplicable(list_env):
    state = Judgment((), CONCAT_NIL_R)
    succ = list(execute(list_env, state, parse_tactic("repeat f_equal", list_env)))
    assert len(succ) == 1 and succ[0].goals == (state,)


# -- records and decomposition -----------------------------------------------

def test_seq_decomposes_into_constituents(list_env):
    state = Judgment((), Forall("ls", "list", Eq(Var("ls"), Var("ls"), "list")))
    s = first_success(list_env, state, parse_tactic("intro; reflexivity", list_env))
    records = decompose_and_record(None, s)
    assert [r.printed for r in records] == ["intro", "reflexivity"]
    assert records[0].before == state
    assert records[1].before == records[0].after[0]
    assert records[1].after == ()


def test_opaque_units_record_single_rows(list_env):
    state = Judgment((), Pred("sublist", (natlist(9, 3), natlist(4, 7, 9, 3))))
    s = first_success(list_env, state, parse_tactic("solve_sublist", list_env))
    assert [r.printed for r in s.records] == ["solve_sublist"]
    s2 = first_success(list_env, state,
                       parse_tactic("repeat (apply sl_cons1 + apply sl_cons2)", list_env))
    assert len(s2.records) == 1
    assert s2.records[0].printed.startswith("repeat")


def test_record_fidelity_replay(list_env):
    state = Judgment((), CONCAT_NIL_R)
    s = first_success(list_env, state,
                      parse_tactic("intros; induction ls; simpl", list_env))
    for r in s.records:
        replay = first_success(list_env, r.before, r.tactic)
        assert replay is not None and replay.goals == r.after


# -- exhaustive small fuzz against the checker --------------------------------

@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**30))
def test_random_tactics_never_fool_the_checker(seed):
    import random as _random

    env = make_list_env()
    rng = _random.Random(seed)
    state = rng.choice([
        Judgment((), CONCAT_NIL_R),
        Judgment((), Pred("sublist", (natlist(9), natlist(9, 1)))),
        Judgment((("ls", TypeHyp("list")),),
                 Eq(App("concat", (Var("ls"), Con("nil"))), Var("ls"), "list")),
    ])
    t = _random_tactic(rng, 2)
    try:
        for s in execute(env, state, t, fuel=60):
            if s.goals == ():
                assert check_derivation(env, s.build([])).ok
            break
    except (FuelExhausted, UnknownReference):
        pass


def _random_tactic(rng, depth):
    atoms = ["intro", "intros", "reflexivity", "symmetry", "assumption",
             "f_equal", "simpl", "auto", "fail", "apply sl_nil",
             "apply sl_cons1", "apply sl_cons2", "induction ls",
             "destruct ls", "solve_sublist"]
    if depth == 0 or rng.random() < 0.5:
        from tacit.engine import parse_tactic as p
        return p(rng.choice(atoms), make_list_env())
    kind = rng.choice(["seq", "alt", "solve", "repeat"])
    if kind == "seq":
        return T.Seq(_random_tactic(rng, depth - 1), _random_tactic(rng, depth - 1))
    if kind == "alt":
        return T.Alt(_random_tactic(rng, depth - 1), _random_tactic(rng, depth - 1))
    if kind == "solve":
        return T.Solve(_random_tactic(rng, depth - 1))
    return T.Repeat(_random_tactic(rng, depth - 1))
