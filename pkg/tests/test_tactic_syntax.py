"""Tactic grammar: printing, parsing, and the round-trip law."""

import pytest
from hypothesis import given, settings, strategies as st

from conftest import make_list_env
from tacit.engine import parse_tactic, print_tactic
from tacit.engine import tactics as T
from tacit.errors import ParseError
from tacit.kernel import Con, Hole, Pred, Var


def test_print_rewrite(list_env):
    assert print_tactic(T.Rewrite("concat_nil_r"), list_env) == "rewrite concat_nil_r"
    assert print_tactic(T.Rewrite("h", reverse=True), list_env) == "rewrite <- h"


def test_parse_paper_alternation(list_env):
    t = parse_tactic("(apply sl_cons1 + apply sl_cons2); solve_sublist", list_env)
    assert t == T.Seq(T.Alt(T.Apply("sl_cons1"), T.Apply("sl_cons2")),
                      T.Call("solve_sublist"))


def test_alt_binds_tighter_than_seq(list_env):
    t = parse_tactic("apply sl_cons1 + apply sl_cons2; solve_sublist", list_env)
    assert isinstance(t, T.Seq)
    assert isinstance(t.first, T.Alt)


def test_parse_search_failing_form(list_env):
    t = parse_tactic("search failing (intro; reflexivity)", list_env)
    assert t == T.SearchFailing((T.Intro(None), T.Reflexivity()))
    assert print_tactic(t, list_env) == "search failing (intro; reflexivity)"


def test_parse_match_goal(list_env):
    src = ("match goal with | |- sublist [] [] => apply sl_nil "
           "| |- _ => solve [auto] end")
    t = parse_tactic(src, list_env)
    assert isinstance(t, T.MatchGoal)
    assert t.arms[0][0] == Pred("sublist", (Con("nil"), Con("nil")))
    assert t.arms[1][0] == Hole(None)
    assert parse_tactic(print_tactic(t, list_env), list_env) == t


def test_parse_error_carries_position(list_env):
    with pytest.raises(ParseError) as exc:
        parse_tactic("apply sl_cons1 +", list_env)
    assert exc.value.line == 1 and exc.value.col is not None


def test_solve_sublist_roundtrip(list_env):
    body = list_env.tactic_defs["solve_sublist"]
    assert parse_tactic(print_tactic(body, list_env), list_env) == body


_atoms = st.sampled_from([
    T.Intro(None), T.Intro("x"), T.Intros(), T.Apply("sl_cons1"),
    T.Rewrite("lem"), T.Rewrite("lem", True), T.Reflexivity(), T.Symmetry(),
    T.Assumption(), T.FEqual(), T.Simpl(), T.Induction("ls"),
    T.Destruct("ls"), T.Auto(), T.Fail(), T.Exact("H"), T.Call("solve_sublist"),
])


def _tactics():
    return st.recursive(
        _atoms,
        lambda inner: st.one_of(
            st.tuples(inner, inner).map(lambda p: T.Seq(*p)),
            st.tuples(inner, inner).map(lambda p: T.Alt(*p)),
            inner.map(T.Solve),
            inner.map(T.Repeat),
        ),
        max_leaves=10)


@settings(max_examples=250, deadline=None)
@given(_tactics())
def test_print_parse_roundtrip(t):
    env = make_list_env()
    assert parse_tactic(print_tactic(t, env), env) == t
