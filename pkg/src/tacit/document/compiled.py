"""Compiled units: canonical .tco files with embedded tactic databases.

A unit carries the file's own declarations, tactic definitions, lemma
statements and tactic records (as proof-state views). Learner models are
not serialized; they are rebuilt from the records when the unit is
loaded, so any registered learner works on old units. Serialization is
canonical JSON with fixed key order and no insignificant whitespace:
loading and re-serializing is byte-identical.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, replace

from ..engine.tactic_parser import parse_tactic
from ..engine.tactics import print_tactic
from ..errors import (DocumentError, HashMismatch, TacitError, UnknownRequire)
from ..kernel.decls import (ConstructorDecl, FixpointFn, InductivePredicate,
                            InductiveType, MatchBranch, PredicateRule)
from ..kernel.terms import App, Con, Eq, Forall, Implies, Pred, Var
from ..learner import make_view
from ..learner.sentence import ProofStateView, Sentence
from ..search import SearchBudget

TCO_VERSION = 1


class CompileError(DocumentError):
    def __init__(self, message, line=None, col=None):
        super().__init__(message)
        self.line = line
        self.col = col

    def __str__(self):
        base = super().__str__()
        if self.line is not None:
            return f"{base} (line {self.line}, col {self.col})"
        return base


@dataclass(frozen=True)
class CompiledUnit:
    version: int
    name: str
    deps: tuple          # of (name, hash)
    decls: tuple         # decl-log entries, JSON-ready
    tactic_defs: tuple   # of (name, printed body)
    lemmas: tuple        # of (name, formula JSON)
    records: tuple       # of record JSON dicts


# -- JSON forms --------------------------------------------------------------

def term_json(t):
    if isinstance(t, Var):
        return ["var", t.name]
    if isinstance(t, Con):
        return ["con", t.name, [term_json(a) for a in t.args]]
    if isinstance(t, App):
        return ["app", t.name, [term_json(a) for a in t.args]]
    raise TypeError(f"not a term: {t!r}")


def term_from_json(x):
    tag = x[0]
    if tag == "var":
        return Var(x[1])
    if tag == "con":
        return Con(x[1], tuple(term_from_json(a) for a in x[2]))
    if tag == "app":
        return App(x[1], tuple(term_from_json(a) for a in x[2]))
    raise DocumentError(f"bad term tag {tag!r}")


def formula_json(f):
    if isinstance(f, Eq):
        return ["eq", term_json(f.lhs), term_json(f.rhs), f.ty]
    if isinstance(f, Pred):
        return ["pred", f.name, [term_json(a) for a in f.args]]
    if isinstance(f, Implies):
        return ["implies", formula_json(f.antecedent), formula_json(f.consequent)]
    if isinstance(f, Forall):
        return ["forall", f.var, f.ty, formula_json(f.body)]
    raise TypeError(f"not a formula: {f!r}")


def formula_from_json(x):
    tag = x[0]
    if tag == "eq":
        return Eq(term_from_json(x[1]), term_from_json(x[2]), x[3])
    if tag == "pred":
        return Pred(x[1], tuple(term_from_json(a) for a in x[2]))
    if tag == "implies":
        return Implies(formula_from_json(x[1]), formula_from_json(x[2]))
    if tag == "forall":
        return Forall(x[1], x[2], formula_from_json(x[3]))
    raise DocumentError(f"bad formula tag {tag!r}")


def sentence_json(s: Sentence):
    return [s.label, [sentence_json(c) for c in s.children]]


def sentence_from_json(x) -> Sentence:
    return Sentence(x[0], tuple(sentence_from_json(c) for c in x[1]))


def state_json(view: ProofStateView):
    return {"hyps": [[h, sentence_json(s)] for h, s in view.hyps],
            "goal": sentence_json(view.goal)}


def state_from_json(x) -> ProofStateView:
    return ProofStateView(tuple((h, sentence_from_json(s)) for h, s in x["hyps"]),
                          sentence_from_json(x["goal"]))


def record_json(record) -> dict:
    return {"before": state_json(record.before_view),
            "tactic": {"printed": record.printed},
            "after": [state_json(v) for v in record.after_views]}


def _decl_json(entry, env):
    kind = entry[0]
    if kind == "decl":
        decl = entry[1]
        if isinstance(decl, InductiveType):
            return ["inductive", decl.name,
                    [[c.name, list(c.arg_types)] for c in decl.constructors]]
        if isinstance(decl, InductivePredicate):
            return ["predicate", decl.name, list(decl.arg_types),
                    [[r.name, [[b, ty] for b, ty in r.binders],
                      [formula_json(p) for p in r.premises],
                      formula_json(r.conclusion)] for r in decl.rules]]
        if isinstance(decl, FixpointFn):
            return ["fixpoint", decl.name, [[p, ty] for p, ty in decl.params],
                    decl.dec_index, decl.result_type,
                    [[b.con, list(b.binders), term_json(b.rhs)]
                     for b in decl.branches]]
        raise TypeError(f"cannot serialize {decl!r}")
    if kind == "notation":
        return ["notation", entry[1], entry[2]]
    raise TypeError(f"cannot serialize log entry {entry!r}")


def _decl_from_json(x):
    tag = x[0]
    if tag == "inductive":
        return "decl", InductiveType(
            x[1], tuple(ConstructorDecl(c, tuple(tys)) for c, tys in x[2]))
    if tag == "predicate":
        return "decl", InductivePredicate(
            x[1], tuple(x[2]),
            tuple(PredicateRule(r[0], tuple((b, ty) for b, ty in r[1]),
                                tuple(formula_from_json(p) for p in r[2]),
                                formula_from_json(r[3])) for r in x[3]))
    if tag == "fixpoint":
        return "decl", FixpointFn(
            x[1], tuple((p, ty) for p, ty in x[2]), x[3], x[4],
            tuple(MatchBranch(c, tuple(bs), term_from_json(rhs))
                  for c, bs, rhs in x[5]))
    if tag == "notation":
        return "notation", x[1], x[2]
    raise DocumentError(f"bad declaration tag {tag!r}")


# -- canonical bytes ---------------------------------------------------------

def canonical_json(obj) -> bytes:
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=False).encode()


def serialize_unit(unit: CompiledUnit) -> bytes:
    return canonical_json({
        "version": unit.version,
        "name": unit.name,
        "deps": [{"name": n, "hash": h} for n, h in unit.deps],
        "decls": list(unit.decls),
        "tactic_defs": [[n, printed] for n, printed in unit.tactic_defs],
        "lemmas": [[n, f] for n, f in unit.lemmas],
        "records": list(unit.records),
    })


def parse_unit(data: bytes) -> CompiledUnit:
    try:
        obj = json.loads(data.decode())
    except Exception as exc:
        raise DocumentError(f"corrupt unit: {exc}") from exc
    if obj.get("version") != TCO_VERSION:
        raise DocumentError(f"unsupported unit version {obj.get('version')}")
    return CompiledUnit(
        obj["version"], obj["name"],
        tuple((d["name"], d["hash"]) for d in obj["deps"]),
        tuple(obj["decls"]),
        tuple((n, p) for n, p in obj["tactic_defs"]),
        tuple((n, f) for n, f in obj["lemmas"]),
        tuple(obj["records"]),
    )


def records_digest(records) -> str:
    """Canonical digest of a record list (SessionRecord sequence)."""
    payload = canonical_json([record_json(r) for r in records])
    return hashlib.sha256(payload).hexdigest()


def file_hash(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


# -- Require -----------------------------------------------------------------

def require(session, state, name: str):
    """Load a compiled unit (and its dependencies) into a session state."""
    return _load(session, state, name, expected_hash=None)


def _load(session, state, name, expected_hash):
    root = session.corpus_root or "."
    path = os.path.join(root, name + ".tco")
    if not os.path.exists(path):
        raise UnknownRequire(f"no compiled unit {name!r} in {root}")
    with open(path, "rb") as fh:
        data = fh.read()
    h = file_hash(data)
    if expected_hash is not None and h != expected_hash:
        raise HashMismatch(f"unit {name} was compiled against different "
                           f"assumptions (hash mismatch)")
    unit = parse_unit(data)
    if name in state.loaded_units:
        if state.loaded_units[name] != h:
            raise HashMismatch(f"unit {name} conflicts with the already "
                               f"loaded version")
        return state, unit  # idempotent re-require
    for dep_name, dep_hash in unit.deps:
        if dep_name in state.loaded_units:
            if state.loaded_units[dep_name] != dep_hash:
                raise HashMismatch(f"dependency {dep_name} of {name} does not "
                                   f"match the loaded version")
        else:
            state, _ = _load(session, state, dep_name, dep_hash)
    return _merge(session, state, unit, h), unit


def _merge(session, state, unit: CompiledUnit, h: str):
    from ..kernel import declare, declare_tactic, set_notation
    from .session import SessionRecord

    env = state.env
    for entry in unit.decls:
        kind, *rest = _decl_from_json(entry)
        if kind == "decl":
            env = declare(env, rest[0])
        else:
            env = set_notation(env, rest[0], rest[1])
    for tname, printed in unit.tactic_defs:
        env = declare_tactic(env, tname, parse_tactic(printed, env))
    for lname, fjson in unit.lemmas:
        env = declare(env, ("lemma", lname, formula_from_json(fjson)))
    model = state.model
    impl = session.learner
    new_records = []
    for rjson in unit.records:
        before = state_from_json(rjson["before"])
        after = tuple(state_from_json(s) for s in rjson["after"])
        expr = parse_tactic(rjson["tactic"]["printed"], env)
        view = make_view(expr, before, env)
        model = impl.add(model, before, view, after)
        new_records.append(SessionRecord(before, view.printed, after, False))
    return replace(state, env=env, model=model,
                   records=state.records + tuple(new_records),
                   loaded_units={**state.loaded_units, unit.name: h})


# -- compilation -------------------------------------------------------------

def compile_source(text: str, name: str, corpus_root: str | None,
                   learner: str = "knn",
                   budget: SearchBudget | None = None,
                   fuel: int | None = None) -> CompiledUnit:
    """Run a document start to finish and assemble its unit.

    Search budgets are node-capped with the wall clock disabled so that
    compilation is deterministic; compiling twice yields identical bytes.
    """
    from ..engine import execute
    from .session import execute_command, new_session
    from .vernacular import split_commands

    if budget is None:
        budget = SearchBudget(seconds=None)
    session = new_session(learner, corpus_root, budget,
                          fuel if fuel is not None else 1000)
    for cmd_text, line, col in split_commands(text):
        try:
            session = execute_command(session, cmd_text).session
        except TacitError as exc:
            raise CompileError(f"{cmd_text.splitlines()[0]!r}: {exc}",
                               line, col) from exc
    state = session.state
    if state.open_proof is not None:
        raise CompileError(f"unfinished proof of {state.open_proof.name}")

    # record fidelity: replaying each own record's tactic on its before
    # state must reproduce its after list exactly
    for r in state.records:
        if not r.own:
            continue
        success = next(execute(state.env, r.before, r.expr, session.fuel), None)
        if success is None or success.goals != r.after:
            raise CompileError(f"record replay diverged for {r.printed!r}")

    own = [r for r in state.records if r.own]
    decls = []
    tactic_defs = []
    lemmas = []
    for entry in state.decl_log:
        if entry[0] == "ltac":
            tactic_defs.append((entry[1], print_tactic(entry[2], state.env)))
        elif entry[0] == "lemma":
            lemmas.append((entry[1], formula_json(entry[2])))
        else:
            decls.append(_decl_json(entry, state.env))
    return CompiledUnit(
        TCO_VERSION, name,
        tuple(state.loaded_units.items()),
        tuple(decls), tuple(tactic_defs), tuple(lemmas),
        tuple(record_json(r) for r in own),
    )


def compile_file(path: str, out_path: str | None = None,
                 corpus_root: str | None = None, learner: str = "knn",
                 budget: SearchBudget | None = None) -> tuple[CompiledUnit, bytes]:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    name = os.path.splitext(os.path.basename(path))[0]
    root = corpus_root or os.path.dirname(os.path.abspath(path))
    unit = compile_source(text, name, root, learner, budget)
    data = serialize_unit(unit)
    if out_path is not None:
        with open(out_path, "wb") as fh:
            fh.write(data)
    return unit, data
