"""Interactive sessions: command stepping, undo, recording, learning.

Session state is entirely value-semantic. Every executed command yields
a new snapshot; undo moves the position back to a stored snapshot, so
records and learner contributions of undone commands are gone with it,
never merely masked. Equal command prefixes give equal states.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from ..engine import first_success
from ..engine.interpreter import DEFAULT_FUEL
from ..engine.tactic_parser import parse_tactic
from ..engine.tactics import print_tactic
from ..errors import (CommandInvalid, FuelExhausted, QedOpenGoals,
                      SoundnessError, TacticFailed, UndoUnderflow,
                      UnknownReference)
from ..kernel import (Environment, Judgment, check_derivation, declare,
                      declare_tactic, set_notation)
from ..learner import encode_state, make_view
from ..learner.registry import Learner, select_learner
from ..learner.sentence import ProofStateView
from ..search import SearchBudget, SearchOutcome
from ..search import search as run_search
from ..search import search_failing as run_search_failing
from ..syntax.printer import print_formula, print_hypothesis
from . import vernacular as V


@dataclass(frozen=True)
class SessionRecord:
    """Database row; engine-form states are kept for own records only."""

    before_view: ProofStateView
    printed: str
    after_views: tuple
    own: bool
    before: object = field(default=None, compare=False, repr=False)
    expr: object = field(default=None, compare=False, repr=False)
    after: tuple = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class OpenProof:
    name: str
    statement: object
    goals: tuple  # of Judgment
    build: object
    started: bool = False  # Proof. was seen


@dataclass(frozen=True)
class SessionState:
    env: Environment = field(default_factory=Environment)
    model: object = None
    records: tuple = ()
    open_proof: OpenProof | None = None
    loaded_units: dict = field(default_factory=dict)  # name -> file hash
    decl_log: tuple = ()  # own declarations, in order, for compilation


@dataclass(frozen=True)
class Session:
    learner_name: str = "knn"
    corpus_root: str | None = None
    budget: SearchBudget = SearchBudget()
    fuel: int = DEFAULT_FUEL
    commands: tuple = ()
    states: tuple = ()  # states[i] is the snapshot after commands[:i]
    position: int = 0

    @property
    def state(self) -> SessionState:
        return self.states[self.position]

    @property
    def learner(self) -> Learner:
        return select_learner(self.learner_name)


@dataclass(frozen=True)
class ExecResult:
    session: Session
    messages: tuple = ()
    data: dict = field(default_factory=dict)


def new_session(learner: str = "knn", corpus_root: str | None = None,
                budget: SearchBudget = SearchBudget(),
                fuel: int = DEFAULT_FUEL) -> Session:
    impl = select_learner(learner)
    initial = SessionState(model=impl.create())
    return Session(learner, corpus_root, budget, fuel, (), (initial,), 0)


def undo(session: Session, k: int) -> Session:
    if k < 0 or k > session.position:
        raise UndoUnderflow(f"cannot undo {k} of {session.position} commands")
    return replace(session, position=session.position - k)


def execute_command(session: Session, text: str) -> ExecResult:
    """Parse and run one command; the input session is unchanged."""
    cmd = V.parse_command(text, session.state.env)
    new_state, messages, data = _apply(session, session.state, cmd)
    commands = session.commands[:session.position] + (text.strip(),)
    states = session.states[:session.position + 1] + (new_state,)
    out = replace(session, commands=commands, states=states,
                  position=session.position + 1)
    return ExecResult(out, tuple(messages), data)


def _require_no_proof(state: SessionState, what):
    if state.open_proof is not None:
        raise CommandInvalid(f"{what} is not allowed inside a proof")


def _require_proof(state: SessionState, what) -> OpenProof:
    if state.open_proof is None:
        raise CommandInvalid(f"{what} needs an open proof")
    return state.open_proof


def _apply(session: Session, state: SessionState, cmd):
    impl = session.learner
    if isinstance(cmd, V.RequireCmd):
        _require_no_proof(state, "Require")
        from .compiled import require
        new_state, unit = require(session, state, cmd.name)
        return new_state, [f"Required {cmd.name} "
                           f"({len(unit.records)} records inherited)."], {}
    if isinstance(cmd, V.DeclCmd):
        _require_no_proof(state, "a declaration")
        env = declare(state.env, cmd.decl)
        log = state.decl_log + (("decl", cmd.decl),)
        if cmd.notation is not None:
            env = set_notation(env, *cmd.notation)
            log = log + (("notation",) + cmd.notation,)
        return (replace(state, env=env, decl_log=log),
                [f"{cmd.decl.name} declared."], {})
    if isinstance(cmd, V.NotationCmd):
        _require_no_proof(state, "Notation")
        env = set_notation(state.env, cmd.symbol, cmd.target)
        log = state.decl_log + (("notation", cmd.symbol, cmd.target),)
        return replace(state, env=env, decl_log=log), ["Notation activated."], {}
    if isinstance(cmd, V.LtacCmd):
        _require_no_proof(state, "Ltac")
        env = declare_tactic(state.env, cmd.name, cmd.body)
        log = state.decl_log + (("ltac", cmd.name, cmd.body),)
        return replace(state, env=env, decl_log=log), [f"{cmd.name} defined."], {}
    if isinstance(cmd, V.LemmaCmd):
        _require_no_proof(state, "Lemma")
        if cmd.name in state.env.lemmas:
            raise CommandInvalid(f"lemma {cmd.name} already exists")
        goal = Judgment((), cmd.statement)
        proof = OpenProof(cmd.name, cmd.statement, (goal,), lambda ds: ds[0])
        return (replace(state, open_proof=proof),
                [f"{cmd.name} opened ({print_formula(state.env, cmd.statement)})."],
                {})
    if isinstance(cmd, V.ProofCmd):
        proof = _require_proof(state, "Proof")
        if proof.started:
            raise CommandInvalid("Proof. already seen")
        return (replace(state, open_proof=replace(proof, started=True)),
                [], {})
    if isinstance(cmd, V.BulletCmd):
        proof = _require_proof(state, "a bullet")
        if not proof.goals:
            raise CommandInvalid("no goals to focus")
        return state, [], {}
    if isinstance(cmd, V.QedCmd):
        proof = _require_proof(state, "Qed")
        if proof.goals:
            raise QedOpenGoals(f"{len(proof.goals)} goals remain")
        derivation = proof.build([])
        verdict = check_derivation(state.env, derivation)
        if not verdict.ok:
            raise SoundnessError(f"derivation rejected: {verdict.reason} "
                                 f"at {verdict.path}")
        env = declare(state.env, ("lemma", proof.name, proof.statement))
        log = state.decl_log + (("lemma", proof.name, proof.statement),)
        return (replace(state, env=env, open_proof=None, decl_log=log),
                [f"{proof.name} is proved."], {})
    if isinstance(cmd, V.SuggestCmd):
        proof = _require_proof(state, "suggest")
        if not proof.goals:
            raise CommandInvalid("no goals left")
        from ..search import suggest
        entries = suggest(state.env, impl, state.model, proof.goals[0])
        lines = [f"{score:.4f}  {tactic}" for score, tactic in entries] \
            or ["no suggestions (empty database)"]
        return state, lines, {"suggestions": [
            {"score": score, "tactic": tactic} for score, tactic in entries]}
    if isinstance(cmd, V.SearchCmd):
        proof = _require_proof(state, "search")
        if not proof.goals:
            raise CommandInvalid("no goals left")
        outcome = run_search(state.env, impl, state.model, proof.goals[0],
                             session.budget, session.fuel)
        return _finish_search(session, state, outcome)
    if isinstance(cmd, V.SearchFailingCmd):
        proof = _require_proof(state, "search failing")
        if not proof.goals:
            raise CommandInvalid("no goals left")
        outcome = run_search_failing(
            state.env, impl, state.model, proof.goals[0],
            [print_tactic(t, state.env) for t in cmd.cache],
            session.budget, session.fuel)
        return _finish_search(session, state, outcome)
    if isinstance(cmd, V.TacticCmd):
        proof = _require_proof(state, "a tactic")
        if not proof.goals:
            raise CommandInvalid("no goals left")
        return _run_tactic(session, state, cmd.expr)
    raise CommandInvalid(f"cannot execute {cmd!r}")


def _run_tactic(session: Session, state: SessionState, expr):
    proof = state.open_proof
    env = state.env
    try:
        success = first_success(env, proof.goals[0], expr, session.fuel)
    except FuelExhausted as exc:
        raise TacticFailed(f"fuel exhausted in {exc}") from exc
    except UnknownReference as exc:
        raise TacticFailed(str(exc)) from exc
    if success is None:
        raise TacticFailed(f"{print_tactic(expr, env)} failed")
    n = len(success.goals)
    old_build = proof.build
    child_build = success.build

    def build(ds, old=old_build, child=child_build, n=n):
        return old([child(ds[:n])] + list(ds[n:]))

    goals = success.goals + proof.goals[1:]
    new_records = []
    model = state.model
    impl = session.learner
    for r in success.records:
        before_view = encode_state(r.before)
        view = make_view(r.tactic, before_view, env)
        after_views = tuple(encode_state(a) for a in r.after)
        model = impl.add(model, before_view, view, after_views)
        new_records.append(SessionRecord(before_view, view.printed, after_views,
                                         True, r.before, r.tactic, r.after))
    new_state = replace(state, model=model,
                        records=state.records + tuple(new_records),
                        open_proof=replace(proof, goals=goals, build=build))
    msg = [f"{len(goals)} goal(s) remain." if goals else "no more goals."]
    return new_state, msg, {}


def _finish_search(session: Session, state: SessionState, outcome: SearchOutcome):
    if not outcome.found:
        raise TacticFailed(
            f"search exhausted its budget ({outcome.expansions} expansions, "
            f"{outcome.elapsed:.2f}s)")
    # replay the found tactics through the normal path: this records them
    # and advances the proof deterministically
    cur = state
    for printed in outcome.proof:
        expr = parse_tactic(printed, cur.env)
        cur, _, _ = _run_tactic(session, cur, expr)
    messages = [
        f"search found a proof in {outcome.expansions} expansions "
        f"({outcome.elapsed:.2f}s), trace {outcome.trace or '(cache)'}",
        outcome.reconstruction(),
    ]
    data = {"proof": list(outcome.proof), "trace": outcome.trace,
            "expansions": outcome.expansions,
            "reconstruction": outcome.reconstruction()}
    return cur, messages, data


def current_goal_views(state: SessionState):
    if state.open_proof is None:
        return []
    return [encode_state(g) for g in state.open_proof.goals]


def describe_goals(state: SessionState) -> list[dict]:
    """Display strings for every open goal."""
    if state.open_proof is None:
        return []
    env = state.env
    out = []
    for g in state.open_proof.goals:
        out.append({
            "hyps": [print_hypothesis(env, h, item) for h, item in g.hyps],
            "goal": print_formula(env, g.goal),
        })
    return out
