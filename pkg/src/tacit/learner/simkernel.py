"""Similarity-scoring backend selection.

The compiled Cython kernel is used when available; a pure-Python loop
with identical semantics is the fallback. Set TACIT_SIMKERNEL=pure to
force the fallback (the benchmark uses this to compare both).
"""

from __future__ import annotations

import os

_FORCED = os.environ.get("TACIT_SIMKERNEL", "").strip().lower()

_compiled = None
if _FORCED != "pure":
    try:
        from . import _simkernel as _compiled  # type: ignore[attr-defined]
    except ImportError:
        _compiled = None

BACKEND = "compiled" if _compiled is not None else "pure"


def score_rows_pure(indptr, indices, weights, norms, qdense, qnorm, out):
    for i in range(len(norms)):
        dot = 0.0
        for j in range(indptr[i], indptr[i + 1]):
            dot += weights[j] * qdense[indices[j]]
        denom = norms[i] * qnorm
        out[i] = dot / denom if denom > 0.0 and dot != 0.0 else 0.0
    return out


if _compiled is not None:
    def score_rows(indptr, indices, weights, norms, qdense, qnorm, out):
        return _compiled.score_rows(indptr, indices, weights, norms,
                                    qdense, qnorm, out)
else:
    score_rows = score_rows_pure
