"""Toy learner: most recently recorded tactics first, state ignored.

Used to exercise the registry contract; scores are insertion indices,
so the prediction equals the reverse-chronological tactic list
deduplicated by normalized key.
"""

from __future__ import annotations

from .registry import Learner, register_learner


def create():
    return ()


def add(model, before, tactic, after=()):
    return model + ((len(model), tactic),)


def predict(model, state):
    out = []
    seen = set()
    for index, view in reversed(model):
        if view.key in seen:
            continue
        seen.add(view.key)
        out.append((float(index), view))
    return out


LEARNER = Learner(name="recency", create=create, add=add, predict=predict)


def register():
    register_learner("recency", LEARNER)
