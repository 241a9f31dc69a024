"""Documents: stepping, undo synchronization, compile, require."""

import random

import pytest

from conftest import FIXTURES, run_script
from tacit.document import (compile_file, execute_command, new_session,
                            parse_unit, records_digest, serialize_unit,
                            split_commands, undo)
from tacit.errors import (CommandInvalid, HashMismatch, ParseError,
                          QedOpenGoals, TacticFailed, UndoUnderflow,
                          UnknownRequire)
from tacit.search import SearchBudget


def fresh(corpus):
    return new_session(corpus_root=str(corpus), budget=SearchBudget(seconds=None))


def test_split_commands_handles_bullets_and_comments():
    text = "(* c *) Lemma x : y.\nProof.\n- simpl. Qed."
    cmds = [c for c, _, _ in split_commands(text)]
    assert cmds == ["Lemma x : y.", "Proof.", "-", "simpl.", "Qed."]


def test_full_concat_nil_r_script(session_after_concat_nil_r):
    state = session_after_concat_nil_r.state
    assert len(state.records) == 7
    assert "concat_nil_r" in state.env.lemmas
    assert state.open_proof is None


def test_qed_with_open_goals(corpus):
    session = fresh(corpus)
    session = execute_command(session, "Require lists.").session
    session = execute_command(session, "Lemma t : forall (ls : list), ls = ls.").session
    session = execute_command(session, "Proof.").session
    before = session
    with pytest.raises(QedOpenGoals):
        execute_command(session, "Qed.")
    assert before.position == session.position  # untouched


def test_failed_tactic_leaves_session_unchanged(corpus):
    session = fresh(corpus)
    session = execute_command(session, "Require lists.").session
    session = execute_command(session, "Lemma t : forall (ls : list), ls = ls.").session
    session = execute_command(session, "Proof.").session
    with pytest.raises(TacticFailed):
        execute_command(session, "reflexivity.")  # goal still quantified
    assert session.state.open_proof.goals  # session value unaffected


def test_tactic_outside_proof_invalid(corpus):
    session = fresh(corpus)
    with pytest.raises(CommandInvalid):
        execute_command(session, "intros.")


def test_parse_error_position(corpus):
    session = fresh(corpus)
    with pytest.raises(ParseError) as exc:
        execute_command(session, "Lemma ( : x.")
    assert exc.value.line == 1


def test_suggest_command_reports_without_state_change(session_after_concat_nil_r):
    session = session_after_concat_nil_r
    session = execute_command(
        session, "Lemma z : ∀ ls, ls ++ [] = ls ++ [].").session
    session = execute_command(session, "Proof.").session
    result = execute_command(session, "suggest.")
    assert result.data["suggestions"][0]["tactic"] == "intros"
    assert result.session.state.records == session.state.records
    assert len(result.session.state.records) == 7


def test_undo_examples(corpus, lists_source):
    # execute t1, t2; undo 1; execute t3  ==  fresh session running t1, t3
    session = fresh(corpus)
    session = run_script(session, lists_source, stop_before="Lemma concat_assoc")
    session = execute_command(session, "Lemma t : ∀ ls, ls ++ [] = ls ++ [].").session
    session = execute_command(session, "Proof.").session
    s1 = execute_command(session, "intros.").session
    s2 = execute_command(s1, "f_equal.").session
    back = undo(s2, 1)
    s3 = execute_command(back, "reflexivity.").session

    replay = fresh(corpus)
    replay = run_script(replay, lists_source, stop_before="Lemma concat_assoc")
    for cmd in ["Lemma t : ∀ ls, ls ++ [] = ls ++ [].", "Proof.", "intros.",
                "reflexivity."]:
        replay = execute_command(replay, cmd).session
    assert s3.state.records == replay.state.records
    assert records_digest(s3.state.records) == records_digest(replay.state.records)

    assert undo(s2, 0).state == s2.state
    with pytest.raises(UndoUnderflow):
        undo(s2, s2.position + 1)


def test_undo_drops_learner_contributions(session_after_concat_nil_r):
    session = session_after_concat_nil_r
    n = session.position
    rolled = undo(session, n)
    assert rolled.state.records == ()
    assert rolled.state.model is rolled.states[0].model


def test_snapshot_isolation(session_after_concat_nil_r):
    session = session_after_concat_nil_r
    held = session.state
    held_records = held.records
    s2 = execute_command(session, "Lemma q : forall (ls : list), ls = ls.").session
    s2 = execute_command(s2, "Proof.").session
    s2 = execute_command(s2, "intros.").session
    assert held.records == held_records
    assert held is session.state


def test_randomized_excursions_match_fresh_replay(corpus, lists_source):
    commands = [c for c, _, _ in split_commands(lists_source)]
    rng = random.Random(42)
    session = fresh(corpus)
    ops = 0
    while ops < 300:
        ops += 1
        can_advance = session.position < len(commands) or \
            session.position < len(session.commands)
        if session.position > 0 and rng.random() < 0.3:
            session = undo(session, rng.randint(1, min(3, session.position)))
        elif session.position < len(commands):
            session = execute_command(session, commands[session.position]).session
        else:
            session = undo(session, rng.randint(1, 3))
    while session.position < len(commands):
        session = execute_command(session, commands[session.position]).session

    replay = fresh(corpus)
    for cmd in commands:
        replay = execute_command(replay, cmd).session
    assert records_digest(session.state.records) == \
        records_digest(replay.state.records)
    assert session.state.records == replay.state.records
    assert list(session.state.env.lemmas) == list(replay.state.env.lemmas)


# -- compile / require -------------------------------------------------------

def test_compile_is_byte_stable(corpus):
    a = (corpus / "lists.tco").read_bytes()
    unit, b = compile_file(str(corpus / "lists.tac"), corpus_root=str(corpus))
    assert a == b


def test_compile_fixture_counts(corpus):
    unit = parse_unit((corpus / "lists.tco").read_bytes())
    assert len(unit.records) == 22  # pinned from the first replay
    assert len(unit.records) >= 9
    assert [n for n, _ in unit.lemmas] == \
        ["concat_nil_r", "concat_assoc", "ex1", "ex2", "dec2"]


def test_compile_roundtrip(corpus):
    data = (corpus / "lists.tco").read_bytes()
    unit = parse_unit(data)
    assert serialize_unit(unit) == data


def test_compile_reports_failing_position(tmp_path, corpus):
    bad = tmp_path / "bad.tac"
    bad.write_text("Require prelude.\nLemma t : forall (n : nat), n = S n.\n"
                   "Proof.\nreflexivity.\nQed.\n")
    from tacit.document.compiled import CompileError
    import shutil
    shutil.copy(corpus / "prelude.tco", tmp_path / "prelude.tco")
    with pytest.raises(CompileError) as exc:
        compile_file(str(bad), corpus_root=str(tmp_path))
    assert exc.value.line == 4


def test_interactive_equals_compile(corpus, lists_source):
    session = fresh(corpus)
    for cmd, _, _ in split_commands(lists_source):
        session = execute_command(session, cmd).session
    own = [r for r in session.state.records if r.own]
    unit = parse_unit((corpus / "lists.tco").read_bytes())
    from tacit.document.compiled import canonical_json, record_json
    import hashlib
    unit_digest = hashlib.sha256(
        canonical_json(list(unit.records))).hexdigest()
    assert records_digest(own) == unit_digest


def test_require_inherits_and_hash_checks(corpus, tmp_path):
    import shutil
    for f in corpus.iterdir():
        shutil.copy(f, tmp_path / f.name)
    session = new_session(corpus_root=str(tmp_path),
                          budget=SearchBudget(seconds=None))
    session = execute_command(session, "Require lists.").session
    assert len(session.state.records) == 22
    assert "concat_nil_r" in session.state.env.lemmas
    assert "solve_sublist" in session.state.env.tactic_defs

    # require the same unit twice: no-op
    again = execute_command(session, "Require lists.").session
    assert again.state.records == session.state.records

    # tamper with the dependency: hash mismatch on a fresh load
    (tmp_path / "prelude.tco").write_bytes(
        (tmp_path / "prelude.tco").read_bytes() + b" ")
    fresh_session = new_session(corpus_root=str(tmp_path),
                                budget=SearchBudget(seconds=None))
    with pytest.raises(HashMismatch):
        execute_command(fresh_session, "Require lists.")

    with pytest.raises(UnknownRequire):
        execute_command(session, "Require missing_unit.")


def test_required_knowledge_feeds_search(corpus):
    session = fresh(corpus)
    session = execute_command(session, "Require lists.").session
    session = execute_command(
        session, "Lemma extra : ∀ ls, (ls ++ []) ++ [] = ls.").session
    session = execute_command(session, "Proof.").session
    result = execute_command(session, "search.")
    assert "reconstruction" in result.data
    session = execute_command(result.session, "Qed.").session
    assert "extra" in session.state.env.lemmas
