"""Feature extraction over sentences.

A proof-state view turns into a multiset of strings: every node label
and every parent>child label pair, prefixed G: for the goal tree and H:
for hypothesis trees. Labels `var:<id>` whose id names a hypothesis are
replaced by `var:*` so that hypothesis names never leak into similarity.
"""

from __future__ import annotations

import math
from collections import Counter

from .sentence import ProofStateView, Sentence

ANON = "var:*"


def _label(s: Sentence, anonymize) -> str:
    if s.label.startswith("var:") and s.label[4:] in anonymize:
        return ANON
    return s.label


def sentence_features(s: Sentence, anonymize=frozenset(), prefix="") -> Counter:
    bag: Counter = Counter()
    stack = [s]
    while stack:
        node = stack.pop()
        label = _label(node, anonymize)
        bag[prefix + label] += 1
        for child in node.children:
            bag[f"{prefix}{label}>{_label(child, anonymize)}"] += 1
            stack.append(child)
    return bag


def featurize(view: ProofStateView) -> Counter:
    ids = frozenset(view.hyp_ids())
    bag = sentence_features(view.goal, ids, "G:")
    for _, sent in view.hyps:
        bag += sentence_features(sent, ids, "H:")
    return bag


def cosine(a, b) -> float:
    """Plain count cosine between two bags."""
    if not a or not b:
        return 0.0
    dot = sum(c * b.get(f, 0) for f, c in a.items())
    if dot == 0:
        return 0.0
    na = math.sqrt(sum(c * c for c in a.values()))
    nb = math.sqrt(sum(c * c for c in b.values()))
    return dot / (na * nb)
