"""Suggestion-guided proof search.

Best-first over search nodes ordered by accumulated cost, where a step
costs -ln of its suggestion's normalized score. Each expansion takes
the node's first open goal, asks the learner for suggestions, executes
each (first success only) and spawns children with the subgoals pushed
in front. A found proof is a flat tactic list in execution order; it is
composed into a derivation and must pass the independent checker before
it counts. The rank trace records which suggestion was taken at every
expansion on the winning path.
"""

from __future__ import annotations

import heapq
import math
import time
from collections import Counter
from dataclasses import dataclass

from ..engine import DEFAULT_FUEL, Judgment, execute
from ..errors import (FuelExhausted, SoundnessError, TacitError,
                      UnknownReference)
from ..kernel import Environment, check_derivation
from ..learner import encode_state, remap_locals
from ..learner.registry import Learner

SUGGEST_DISPLAY_LIMIT = 16
DEFAULT_NODE_CAP = 50_000
DEFAULT_SECONDS = 10.0
DEFAULT_BREADTH = 10


@dataclass(frozen=True)
class SearchBudget:
    nodes: int = DEFAULT_NODE_CAP
    seconds: float | None = DEFAULT_SECONDS  # None disables the wall clock
    breadth: int = DEFAULT_BREADTH
    seed: int | None = None  # reserved for future traversal policies

    def __post_init__(self):
        if self.nodes <= 0 or self.breadth <= 0:
            raise ValueError("budget counts must be positive")
        if self.seconds is not None and self.seconds <= 0:
            raise ValueError("wall-clock limit must be positive")


@dataclass(frozen=True)
class SearchOutcome:
    found: bool
    proof: tuple = ()          # printed tactics, reconstruction order
    trace: str = ""
    expansions: int = 0
    elapsed: float = 0.0
    checked: bool = False

    def reconstruction(self) -> str:
        return "search failing (" + "; ".join(self.proof) + ")"


def format_trace(ranks) -> str:
    return "".join(f".{r}" for r in ranks)


def suggest_views(env: Environment, learner: Learner, model, state: Judgment,
                  limit: int | None = SUGGEST_DISPLAY_LIMIT) -> list:
    """Ranked (score, TacticView) after local-variable remapping."""
    out = []
    for score, view in learner.predict(model, encode_state(state)):
        remapped = remap_locals(state, view)
        if remapped is None:
            continue
        out.append((score, remapped))
        if limit is not None and len(out) >= limit:
            break
    return out


def suggest(env: Environment, learner: Learner, model, state: Judgment,
            limit: int | None = SUGGEST_DISPLAY_LIMIT) -> list:
    """Ranked (score, printed tactic); not filtered by executability."""
    return [(score, view.printed)
            for score, view in suggest_views(env, learner, model, state, limit)]


def _first_success(env, state, view, fuel):
    try:
        return next(execute(env, state, view.expr, fuel), None)
    except (FuelExhausted, UnknownReference):
        return None  # prune, do not abort the search


class _Node:
    __slots__ = ("goals", "cost", "path", "builders", "visited")

    def __init__(self, goals, cost, path, builders, visited):
        self.goals = goals        # tuple of Judgment
        self.cost = cost
        self.path = path          # tuple of (rank, printed tactic)
        self.builders = builders  # assemble Derivation from per-goal subs
        self.visited = visited    # frozenset of goal-multiset keys on path


def _goals_key(goals) -> frozenset:
    # keyed on whole judgments: with Coq-style binder reuse the inductive
    # step's goal formula equals the pre-induction goal verbatim, and a
    # formula-only key would prune the intended proof as a cycle
    return frozenset(Counter(goals).items())


def search(env: Environment, learner: Learner, model, state: Judgment,
           budget: SearchBudget = SearchBudget(), fuel: int = DEFAULT_FUEL,
           should_stop=None, on_expansion=None) -> SearchOutcome:
    start = time.monotonic()
    root = _Node((state,), 0.0, (), lambda ds: ds[0], frozenset({_goals_key((state,))}))
    heap = [(0.0, 0)]
    nodes = {0: root}
    counter = 1
    expansions = 0

    def finish(found, node=None, checked=False):
        elapsed = time.monotonic() - start
        if not found:
            return SearchOutcome(False, (), "", expansions, elapsed, False)
        return SearchOutcome(True, tuple(p for _, p in node.path),
                             format_trace([r for r, _ in node.path]),
                             expansions, elapsed, checked)

    while heap:
        if expansions >= budget.nodes:
            return finish(False)
        if budget.seconds is not None and time.monotonic() - start > budget.seconds:
            return finish(False)
        if should_stop is not None and should_stop():
            return finish(False)
        cost, node_id = heapq.heappop(heap)
        node = nodes.pop(node_id)
        expansions += 1
        if on_expansion is not None:
            on_expansion(expansions)
        goal, rest = node.goals[0], node.goals[1:]
        suggestions = suggest_views(env, learner, model, goal,
                                    limit=budget.breadth)
        total = sum(score for score, _ in suggestions)
        for rank, (score, view) in enumerate(suggestions):
            success = _first_success(env, goal, view, fuel)
            if success is None:
                continue
            child_goals = success.goals + rest
            key = _goals_key(child_goals)
            if key in node.visited:
                continue
            norm = (score / total) if total > 0 else 1.0 / len(suggestions)
            step_cost = math.inf if norm <= 0 else -math.log(norm)
            child = _Node(
                child_goals,
                node.cost + step_cost,
                node.path + ((rank, view.printed),),
                _compose(node.builders, success.build, len(success.goals)),
                node.visited | {key},
            )
            if not child.goals:
                derivation = child.builders([])
                verdict = check_derivation(env, derivation)
                if not verdict.ok:
                    raise SoundnessError(
                        f"search produced an unchecked proof: {verdict.reason}")
                return finish(True, child, checked=True)
            heapq.heappush(heap, (child.cost, counter))
            nodes[counter] = child
            counter += 1
    return finish(False)


def _compose(parent_build, child_build, n_new):
    def build(ds):
        return parent_build([child_build(ds[:n_new])] + list(ds[n_new:]))
    return build


def replay_proof(env: Environment, state: Judgment, views_or_exprs,
                 fuel: int = DEFAULT_FUEL):
    """Apply a flat tactic list to the first open goal, first success only.

    Returns (remaining goals, derivation builder) or None on any failure.
    """
    goals = (state,)
    build = lambda ds: ds[0]  # noqa: E731
    for item in views_or_exprs:
        if not goals:
            return None
        expr = item.expr if hasattr(item, "expr") else item
        try:
            success = next(execute(env, goals[0], expr, fuel), None)
        except (FuelExhausted, UnknownReference, TacitError):
            return None
        if success is None:
            return None
        build = _compose(build, success.build, len(success.goals))
        goals = success.goals + goals[1:]
    return goals, build


def search_failing(env: Environment, learner: Learner, model, state: Judgment,
                   cache, budget: SearchBudget = SearchBudget(),
                   fuel: int = DEFAULT_FUEL, should_stop=None,
                   on_expansion=None) -> SearchOutcome:
    """Replay a cached proof; on any failure fall back to a fresh search."""
    from ..engine import parse_tactic, print_tactic

    exprs = [parse_tactic(t, env) if isinstance(t, str) else t for t in cache]
    start = time.monotonic()
    replayed = replay_proof(env, state, exprs, fuel)
    if replayed is not None:
        goals, build = replayed
        if not goals:
            derivation = build([])
            if check_derivation(env, derivation).ok:
                return SearchOutcome(True,
                                     tuple(print_tactic(e, env) for e in exprs),
                                     "", 0, time.monotonic() - start, True)
    # cache did not close the goal: discard partial progress, search fresh
    return search(env, learner, model, state, budget, fuel,
                  should_stop=should_stop, on_expansion=on_expansion)


def redrive_trace(env: Environment, learner: Learner, model, state: Judgment,
                  trace: str, budget: SearchBudget = SearchBudget(),
                  fuel: int = DEFAULT_FUEL):
    """Re-drive expansion choices by rank indices; returns the proof.

    Raises SoundnessError if the trace does not reproduce a checked proof.
    """
    ranks = [int(r) for r in trace.split(".")[1:]] if trace else []
    goals = (state,)
    build = lambda ds: ds[0]  # noqa: E731
    proof = []
    for rank in ranks:
        if not goals:
            raise SoundnessError("trace longer than the proof")
        suggestions = suggest_views(env, learner, model, goals[0],
                                    limit=budget.breadth)
        if rank >= len(suggestions):
            raise SoundnessError(f"trace rank {rank} out of range")
        _, view = suggestions[rank]
        success = _first_success(env, goals[0], view, fuel)
        if success is None:
            raise SoundnessError(f"trace step {view.printed!r} failed")
        proof.append(view.printed)
        build = _compose(build, success.build, len(success.goals))
        goals = success.goals + goals[1:]
    if goals:
        raise SoundnessError("trace did not close the goal")
    if not check_derivation(env, build([])).ok:
        raise SoundnessError("re-driven proof failed the checker")
    return tuple(proof)
