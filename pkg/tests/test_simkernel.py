"""The compiled scorer and the pure fallback must agree exactly enough."""

import math
import random
from array import array

import pytest

from tacit.learner import simkernel


def _case(rng, n_rows, vocab):
    indptr = array("q", [0])
    indices = array("q")
    weights = array("d")
    norms = array("d")
    for _ in range(n_rows):
        cols = sorted(rng.sample(range(vocab), rng.randrange(0, vocab)))
        sq = 0.0
        for c in cols:
            w = rng.uniform(0, 3)
            indices.append(c)
            weights.append(w)
            sq += w * w
        indptr.append(len(indices))
        norms.append(math.sqrt(sq))
    qdense = array("d", [rng.uniform(0, 2) if rng.random() < 0.5 else 0.0
                         for _ in range(vocab)])
    qnorm = math.sqrt(sum(w * w for w in qdense)) or 1.0
    return indptr, indices, weights, norms, qdense, qnorm


def test_backends_agree():
    rng = random.Random(9)
    for _ in range(25):
        indptr, indices, weights, norms, qdense, qnorm = _case(rng, 30, 12)
        pure = array("d", [0.0] * len(norms))
        simkernel.score_rows_pure(indptr, indices, weights, norms, qdense,
                                  qnorm, pure)
        active = array("d", [0.0] * len(norms))
        simkernel.score_rows(indptr, indices, weights, norms, qdense, qnorm,
                             active)
        assert list(pure) == pytest.approx(list(active), abs=1e-12)


def test_zero_norm_rows_score_zero():
    indptr = array("q", [0, 0])  # one empty row
    out = array("d", [1.0])
    simkernel.score_rows_pure(indptr, array("q"), array("d"), array("d", [0.0]),
                              array("d", [1.0]), 1.0, out)
    assert out[0] == 0.0
