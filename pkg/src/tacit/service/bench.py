"""Leave-one-out benchmark over a proof document.

For each lemma in file order: build a session from every preceding
command (the lemma's own proof stripped), open the lemma, and run
search within the budget. Found proofs are verified by re-driving their
rank traces; a divergence is an internal error, while a lemma that is
simply not found is data.
"""

from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import dataclass

from ..document import execute_command, new_session, split_commands
from ..document.vernacular import LemmaCmd, parse_command
from ..errors import SoundnessError
from ..search import SearchBudget, redrive_trace, search


@dataclass(frozen=True)
class BenchRow:
    lemma: str
    found: bool
    expansions: int
    elapsed: float
    trace: str
    proof_len: int


@dataclass(frozen=True)
class BenchReport:
    rows: tuple
    lemmas: int
    proved: int

    @property
    def fraction(self) -> float:
        return self.proved / self.lemmas if self.lemmas else 0.0


def bench_file(path: str, corpus_root: str | None = None,
               budget: SearchBudget | None = None, learner: str = "knn",
               whole_file: bool = False, verify_traces: bool = True) -> BenchReport:
    import os

    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if corpus_root is None:
        corpus_root = os.path.dirname(os.path.abspath(path))
    budget = budget or SearchBudget(seconds=None)
    commands = split_commands(text)

    if whole_file:
        return _bench_whole_file(text, commands, corpus_root, budget, learner,
                                 verify_traces)

    session = new_session(learner, corpus_root, budget)
    rows = []
    for cmd_text, line, col in commands:
        cmd = parse_command(cmd_text, session.state.env)
        if isinstance(cmd, LemmaCmd):
            rows.append(_attempt(session, cmd, budget, verify_traces))
        # the main session executes everything, real proofs included,
        # so later lemmas learn from this one
        session = execute_command(session, cmd_text).session
    proved = sum(1 for r in rows if r.found)
    return BenchReport(tuple(rows), len(rows), proved)


def _attempt(session, cmd: LemmaCmd, budget, verify_traces) -> BenchRow:
    from ..engine import Judgment

    state = session.state
    goal = Judgment((), cmd.statement)
    impl = session.learner
    start = time.monotonic()
    outcome = search(state.env, impl, state.model, goal, budget)
    elapsed = time.monotonic() - start
    if outcome.found and verify_traces:
        redriven = redrive_trace(state.env, impl, state.model, goal,
                                 outcome.trace, budget)
        if tuple(redriven) != tuple(outcome.proof):
            raise SoundnessError(f"trace of {cmd.name} re-drives to a "
                                 f"different proof")
    return BenchRow(cmd.name, outcome.found, outcome.expansions, elapsed,
                    outcome.trace, len(outcome.proof))


def _bench_whole_file(text, commands, corpus_root, budget, learner,
                      verify_traces):
    """Database = the whole file minus the target lemma's own records."""
    from ..engine import Judgment

    # first pass: full session, noting each lemma's record span
    session = new_session(learner, corpus_root, budget)
    spans = []  # (LemmaCmd, first_record, last_record)
    for cmd_text, _, _ in commands:
        cmd = parse_command(cmd_text, session.state.env)
        before = len(session.state.records)
        session = execute_command(session, cmd_text).session
        if isinstance(cmd, LemmaCmd):
            spans.append([cmd, before, None])
        if spans and spans[-1][2] is None and session.state.open_proof is None:
            spans[-1][2] = len(session.state.records)
    full = session.state
    impl = session.learner
    rows = []
    for cmd, first, last in spans:
        model = impl.create()
        kept = [r for i, r in enumerate(full.records) if not first <= i < last]
        for r in kept:
            from ..learner import make_view
            from ..engine.tactic_parser import parse_tactic
            view = make_view(parse_tactic(r.printed, full.env), r.before_view,
                             full.env)
            model = impl.add(model, r.before_view, view, r.after_views)
        goal = Judgment((), cmd.statement)
        start = time.monotonic()
        outcome = search(full.env, impl, model, goal, budget)
        elapsed = time.monotonic() - start
        rows.append(BenchRow(cmd.name, outcome.found, outcome.expansions,
                             elapsed, outcome.trace, len(outcome.proof)))
    proved = sum(1 for r in rows if r.found)
    return BenchReport(tuple(rows), len(rows), proved)


def report_json(report: BenchReport) -> str:
    payload = [{"lemma": r.lemma, "found": r.found, "expansions": r.expansions,
                "elapsed": round(r.elapsed, 4), "trace": r.trace,
                "proof_len": r.proof_len} for r in report.rows]
    payload.append({"lemmas": report.lemmas, "proved": report.proved,
                    "success_fraction": report.fraction})
    return json.dumps(payload, indent=2)


def report_csv(report: BenchReport) -> str:
    out = io.StringIO()
    writer = csv.writer(out)
    writer.writerow(["lemma", "found", "expansions", "elapsed", "trace",
                     "proof_len"])
    for r in report.rows:
        writer.writerow([r.lemma, str(r.found).lower(), r.expansions,
                         f"{r.elapsed:.4f}", r.trace, r.proof_len])
    return out.getvalue()
