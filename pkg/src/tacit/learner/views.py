"""Tactic views: the learner-facing handle on recorded tactics.

A view exposes exactly three things besides its printed form: its
sentence encoding, its local variables (references into the recording
state's hypothesis context), and simultaneous renaming of those locals.
Tactics are predicted, never synthesized, so nothing else is mutable.

The normalized key replaces each local with _L<i> by first occurrence;
it groups the same tactic applied to differently named hypotheses into
one candidate. Global lemma arguments stay in the key verbatim.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..engine.state import Judgment
from ..engine.tactics import print_tactic, references, rename_references
from ..errors import IncompleteMapping
from .features import cosine, sentence_features
from .sentence import ProofStateView, Sentence, encode_state, tactic_expr_sentence


@dataclass(frozen=True)
class TacticView:
    expr: object
    printed: str
    locals: tuple  # of (name, frozen feature bag of the recorded hypothesis)
    key: str
    env: object = field(default=None, compare=False, repr=False)

    def local_names(self):
        return [n for n, _ in self.locals]


def _freeze(bag) -> tuple:
    return tuple(sorted(bag.items()))


def _thaw(frozen) -> dict:
    return dict(frozen)


def make_view(expr, before: ProofStateView | None, env=None) -> TacticView:
    """Build a view, classifying references against the recording state."""
    hyp_sentences = dict(before.hyps) if before is not None else {}
    ids = frozenset(hyp_sentences)
    local_names = []
    for ref in references(expr):
        if ref in ids and ref not in local_names:
            local_names.append(ref)
    locals_ = tuple(
        (name, _freeze(sentence_features(hyp_sentences[name], ids)))
        for name in local_names)
    key_map = {name: f"_L{i}" for i, name in enumerate(local_names)}
    key = print_tactic(rename_references(expr, key_map), env)
    return TacticView(expr, print_tactic(expr, env), locals_, key, env)


def tactic_sentence(view: TacticView) -> Sentence:
    return tactic_expr_sentence(view.expr)


def local_variables(view: TacticView) -> list[str]:
    return view.local_names()


def substitute(view: TacticView, mapping: dict) -> TacticView:
    """Simultaneous renaming of the view's local variables."""
    missing = [n for n in view.local_names() if n not in mapping]
    if missing:
        raise IncompleteMapping(f"mapping misses {', '.join(missing)}")
    relevant = {n: mapping[n] for n in view.local_names()}
    if all(k == v for k, v in relevant.items()):
        return view
    expr = rename_references(view.expr, relevant)
    locals_ = tuple((relevant[n], bag) for n, bag in view.locals)
    return TacticView(expr, print_tactic(expr, view.env), locals_, view.key,
                      view.env)


def remap_locals(state: Judgment, view: TacticView) -> TacticView | None:
    """Adapt a view's locals to a new state, or None if inapplicable.

    Locals already present map to themselves; absent ones map to the
    most feature-similar hypothesis (earliest on ties).
    """
    if not view.locals:
        return view
    state_view = encode_state(state)
    ids = state_view.hyp_ids()
    absent = [n for n in view.local_names() if n not in ids]
    if absent and not ids:
        return None
    id_set = frozenset(ids)
    candidate_bags = [sentence_features(sent, id_set) for _, sent in state_view.hyps]
    mapping = {}
    for name, frozen in view.locals:
        if name in id_set:
            mapping[name] = name
            continue
        bag = _thaw(frozen)
        best_i, best_score = 0, -1.0
        for i, cand in enumerate(candidate_bags):
            score = cosine(bag, cand)
            if score > best_score:  # strict: ties keep the earliest hypothesis
                best_i, best_score = i, score
        mapping[name] = ids[best_i]
    return substitute(view, mapping)
