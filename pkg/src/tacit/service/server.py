"""HTTP/JSON session API.

Sessions are value snapshots guarded by a per-session lock; search runs
as an asynchronous job on a snapshot and never mutates the session, so
deleting the session simply cancels the job. One search job may be in
flight per session (409 on a second).
"""

from __future__ import annotations

import itertools
import threading
import time
from dataclasses import dataclass, field

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from ..document import (describe_goals, execute_command, new_session,
                        records_digest, state_json, undo)
from ..errors import (CommandInvalid, DocumentError, ParseError, TacitError,
                      UndoUnderflow)
from ..learner import encode_state
from ..search import SearchBudget, search
from ..search import SUGGEST_DISPLAY_LIMIT, suggest


class CreateSession(BaseModel):
    file: str | None = None


class CommandBody(BaseModel):
    text: str


class UndoBody(BaseModel):
    k: int = 1


class SearchBody(BaseModel):
    nodes: int | None = None
    seconds: float | None = None


@dataclass
class Job:
    id: str
    status: str = "running"  # running | found | exhausted | error
    expansions: int = 0
    elapsed: float = 0.0
    proof: list | None = None
    trace: str | None = None
    reconstruction: str | None = None
    error: str | None = None
    cancel: bool = False
    started: float = field(default_factory=time.monotonic)


@dataclass
class Entry:
    session: object
    lock: threading.Lock = field(default_factory=threading.Lock)
    job: Job | None = None


def create_app(corpus_root: str | None = None, learner: str = "knn",
               budget: SearchBudget | None = None) -> FastAPI:
    app = FastAPI(title="tacit", version="0.1.0")
    sessions: dict[str, Entry] = {}
    ids = itertools.count(1)
    default_budget = budget or SearchBudget()

    def entry_of(sid: str) -> Entry:
        entry = sessions.get(sid)
        if entry is None:
            raise HTTPException(404, f"unknown session {sid}")
        return entry

    def proof_payload(state):
        views = [encode_state(g) for g in state.open_proof.goals] \
            if state.open_proof else []
        display = describe_goals(state)
        payload = {}
        if views:
            payload["proof_state"] = state_json(views[0])
            payload["display"] = display[0]
        return payload

    @app.post("/sessions")
    def create(body: CreateSession):
        session = new_session(learner, corpus_root, default_budget)
        sid = f"s{next(ids)}"
        if body.file:
            from ..document import split_commands
            try:
                for text, _, _ in split_commands(body.file):
                    session = execute_command(session, text).session
            except ParseError as exc:
                raise HTTPException(400, str(exc))
            except TacitError as exc:
                raise HTTPException(409, str(exc))
        sessions[sid] = Entry(session)
        return {"id": sid}

    @app.delete("/sessions/{sid}")
    def delete(sid: str):
        entry = entry_of(sid)
        if entry.job is not None:
            entry.job.cancel = True
        del sessions[sid]
        return {"deleted": sid}

    @app.post("/sessions/{sid}/command")
    def command(sid: str, body: CommandBody):
        entry = entry_of(sid)
        with entry.lock:
            try:
                result = execute_command(entry.session, body.text)
            except ParseError as exc:
                raise HTTPException(400, {"error": str(exc), "line": exc.line,
                                          "col": exc.col})
            except (CommandInvalid, DocumentError, TacitError) as exc:
                raise HTTPException(409, str(exc))
            entry.session = result.session
            state = entry.session.state
            out = {"ok": True, "position": entry.session.position,
                   "messages": list(result.messages)}
            out.update(result.data)
            out.update(proof_payload(state))
            return out

    @app.post("/sessions/{sid}/undo")
    def do_undo(sid: str, body: UndoBody):
        entry = entry_of(sid)
        with entry.lock:
            try:
                entry.session = undo(entry.session, body.k)
            except UndoUnderflow as exc:
                raise HTTPException(409, str(exc))
            return {"position": entry.session.position}

    @app.get("/sessions/{sid}/state")
    def get_state(sid: str):
        entry = entry_of(sid)
        with entry.lock:
            session = entry.session
            state = session.state
            own = [r for r in state.records if r.own]
            out = {
                "position": session.position,
                "commands": list(session.commands[:session.position]),
                "goals": describe_goals(state),
                "open_lemma": state.open_proof.name if state.open_proof else None,
                "lemmas": list(state.env.lemmas),
                "records": len(state.records),
                "records_digest": records_digest(own),
            }
            out.update(proof_payload(state))
            return out

    @app.get("/sessions/{sid}/suggest")
    def get_suggest(sid: str):
        entry = entry_of(sid)
        with entry.lock:
            session = entry.session
            state = session.state
            if state.open_proof is None or not state.open_proof.goals:
                return {"suggestions": []}
            entries = suggest(state.env, session.learner, state.model,
                              state.open_proof.goals[0], SUGGEST_DISPLAY_LIMIT)
            return {"suggestions": [{"score": s, "tactic": t}
                                    for s, t in entries]}

    @app.post("/sessions/{sid}/search")
    def start_search(sid: str, body: SearchBody):
        entry = entry_of(sid)
        with entry.lock:
            session = entry.session
            state = session.state
            if state.open_proof is None or not state.open_proof.goals:
                raise HTTPException(409, "no open goal to search for")
            if entry.job is not None and entry.job.status == "running":
                raise HTTPException(409, "a search is already running")
            job = Job(id=f"j{next(ids)}")
            entry.job = job
            budget = SearchBudget(
                nodes=body.nodes or default_budget.nodes,
                seconds=body.seconds if body.seconds is not None
                else default_budget.seconds,
                breadth=default_budget.breadth)
            goal = state.open_proof.goals[0]
            env, impl, model = state.env, session.learner, state.model

        def run():
            try:
                outcome = search(env, impl, model, goal, budget,
                                 should_stop=lambda: job.cancel,
                                 on_expansion=lambda n: _progress(job, n))
                job.elapsed = outcome.elapsed
                job.expansions = outcome.expansions
                if outcome.found:
                    job.proof = list(outcome.proof)
                    job.trace = outcome.trace
                    job.reconstruction = outcome.reconstruction()
                    job.status = "found"
                else:
                    job.status = "exhausted"
            except TacitError as exc:
                job.error = str(exc)
                job.status = "error"

        threading.Thread(target=run, daemon=True).start()
        return {"job": job.id}

    def _progress(job: Job, n: int):
        job.expansions = n
        job.elapsed = time.monotonic() - job.started

    @app.get("/sessions/{sid}/search/{job_id}")
    def poll_search(sid: str, job_id: str):
        entry = entry_of(sid)
        job = entry.job
        if job is None or job.id != job_id:
            raise HTTPException(404, f"unknown job {job_id}")
        out = {"status": job.status, "expansions": job.expansions,
               "elapsed": job.elapsed}
        if job.status == "found":
            out["proof"] = job.proof
            out["trace"] = job.trace
            out["reconstruction"] = job.reconstruction
        if job.error:
            out["error"] = job.error
        return out

    return app
