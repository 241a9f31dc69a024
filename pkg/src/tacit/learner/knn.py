"""Online k-nearest-neighbor model over proof-state features.

Models are persistent values: `add` returns a new model and old
snapshots keep answering queries unchanged. Similarity is cosine over
tf-idf-weighted feature counts with idf(f) = ln((1+N)/(1+df(f))); the
k most similar rows vote for their tactics, grouped by normalized key.

Scoring arrays (a CSR matrix plus per-row norms) are derived lazily and
cached per model value, since a proof search issues many queries
against one frozen snapshot. The inner loop runs in the compiled
kernel when it is available.
"""

from __future__ import annotations

import math
from array import array
from dataclasses import dataclass, field

from .features import featurize
from .sentence import ProofStateView
from .simkernel import score_rows
from .views import TacticView

DEFAULT_K = 20


@dataclass(frozen=True)
class KnnRow:
    bag: dict
    key: str
    view: TacticView
    index: int


@dataclass(frozen=True, eq=False)
class KnnModel:
    rows: tuple = ()
    df: dict = field(default_factory=dict)  # feature -> document frequency
    k: int = DEFAULT_K
    _pack: list = field(default_factory=list, repr=False)  # lazy scoring cache


def create(k: int = DEFAULT_K) -> KnnModel:
    return KnnModel(k=k)


def add(model: KnnModel, before: ProofStateView, tactic: TacticView,
        after=()) -> KnnModel:
    """New model with one more row; `model` itself is untouched."""
    bag = dict(featurize(before))
    row = KnnRow(bag, tactic.key, tactic, len(model.rows))
    df = dict(model.df)
    for f in bag:
        df[f] = df.get(f, 0) + 1
    return KnnModel(model.rows + (row,), df, model.k)


def _idf(model: KnnModel, feature: str) -> float:
    n = len(model.rows)
    return math.log((1 + n) / (1 + model.df.get(feature, 0)))


def _pack(model: KnnModel):
    if model._pack:
        return model._pack[0]
    vocab = {f: i for i, f in enumerate(sorted(model.df))}
    idf = array("d", [0.0] * len(vocab))
    for f, i in vocab.items():
        idf[i] = _idf(model, f)
    indptr = array("q", [0])
    indices = array("q")
    weights = array("d")
    norms = array("d")
    for row in model.rows:
        sq = 0.0
        for f, cnt in sorted(row.bag.items()):
            w = cnt * idf[vocab[f]]
            indices.append(vocab[f])
            weights.append(w)
            sq += w * w
        indptr.append(len(indices))
        norms.append(math.sqrt(sq))
    pack = (vocab, idf, indptr, indices, weights, norms)
    model._pack.append(pack)  # idempotent; safe under concurrent readers
    return pack


def similarities(model: KnnModel, query_bag) -> array:
    vocab, idf, indptr, indices, weights, norms = _pack(model)
    qdense = array("d", [0.0] * len(vocab))
    sq = 0.0
    n = len(model.rows)
    for f, cnt in query_bag.items():
        i = vocab.get(f)
        w = cnt * (idf[i] if i is not None else math.log(1 + n))
        sq += w * w
        if i is not None:
            qdense[i] = w
    qnorm = math.sqrt(sq)
    out = array("d", [0.0] * n)
    if n == 0:
        return out
    return score_rows(indptr, indices, weights, norms, qdense, qnorm, out)


def predict(model: KnnModel, state: ProofStateView) -> list:
    """Ranked (score, TacticView) candidates, one per normalized key."""
    if not model.rows:
        return []
    sims = similarities(model, featurize(state))
    order = sorted(range(len(model.rows)),
                   key=lambda i: (-sims[i], -i))  # ties: most recent first
    groups: dict = {}
    for ri in order[:model.k]:
        row = model.rows[ri]
        entry = groups.get(row.key)
        if entry is None:
            groups[row.key] = [sims[ri], row.index, row.view]
        else:
            entry[0] += sims[ri]
            if row.index > entry[1]:
                entry[1] = row.index
                entry[2] = row.view
    ranked = sorted(groups.values(), key=lambda e: (-e[0], -e[1]))
    out = [(score, view) for score, _, view in ranked]
    assert all(out[i][0] >= out[i + 1][0] for i in range(len(out) - 1))
    return out


def recount_df(model: KnnModel) -> dict:
    """Exact recount of document frequencies, for consistency checks."""
    df: dict = {}
    for row in model.rows:
        for f in row.bag:
            df[f] = df.get(f, 0) + 1
    return df
