"""Pluggable learner registry.

A learner bundles create/add/predict over persistent model values. The
default "knn" model is always registered; additional models registered
before a session starts are picked up by suggest and search
automatically.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from ..errors import DuplicateLearnerName, UnknownLearnerName
from . import knn


@dataclass(frozen=True)
class Learner:
    name: str
    create: Callable        # () -> model
    add: Callable           # (model, before_view, tactic_view, after_views) -> model
    predict: Callable       # (model, state_view) -> [(score, TacticView)]


_REGISTRY: dict[str, Learner] = {}


def register_learner(name: str, impl: Learner) -> None:
    if name in _REGISTRY:
        raise DuplicateLearnerName(f"learner {name!r} already registered")
    _REGISTRY[name] = impl


def select_learner(name: str) -> Learner:
    impl = _REGISTRY.get(name)
    if impl is None:
        raise UnknownLearnerName(f"unknown learner {name!r}")
    return impl


def registered_learners() -> list[str]:
    return list(_REGISTRY)


register_learner("knn", Learner(
    name="knn",
    create=knn.create,
    add=lambda model, before, tactic, after=(): knn.add(model, before, tactic, after),
    predict=knn.predict,
))
