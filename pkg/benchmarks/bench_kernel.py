"""Compare the compiled similarity kernel against the pure-Python fallback.

The k-NN scoring loop is the hot kernel of proof search: suggest runs
once per node expansion and scores the query state against every
database row. This benchmark builds a synthetic model and times predict
with both backends.

    python benchmarks/bench_kernel.py [rows] [queries]
"""

import random
import sys
import time

from tacit.learner import knn, simkernel
from tacit.learner.sentence import ProofStateView, Sentence
from tacit.learner.views import TacticView


def synthetic_model(n_rows: int, vocab: int, rng: random.Random):
    model = knn.create(k=20)
    for i in range(n_rows):
        labels = tuple(Sentence(f"f{rng.randrange(vocab)}")
                       for _ in range(rng.randrange(4, 24)))
        state = ProofStateView((), Sentence("goal", labels))
        view = TacticView(None, f"tactic{i % 37}", (), f"tactic{i % 37}")
        model = knn.add(model, state, view)
    return model


def queries(n: int, vocab: int, rng: random.Random):
    out = []
    for _ in range(n):
        labels = tuple(Sentence(f"f{rng.randrange(vocab)}")
                       for _ in range(rng.randrange(4, 24)))
        out.append(ProofStateView((), Sentence("goal", labels)))
    return out


def run(model, probes, backend):
    knn.predict(model, probes[0])  # warm the pack cache
    start = time.perf_counter()
    sink = 0.0
    for p in probes:
        out = knn.predict(model, p)
        if out:
            sink += out[0][0]
    elapsed = time.perf_counter() - start
    return elapsed, sink


def main():
    n_rows = int(sys.argv[1]) if len(sys.argv) > 1 else 2000
    n_queries = int(sys.argv[2]) if len(sys.argv) > 2 else 500
    rng = random.Random(1)
    model = synthetic_model(n_rows, 400, rng)
    probes = queries(n_queries, 400, rng)

    results = {}
    for backend, fn in [("pure", simkernel.score_rows_pure),
                        ("active", simkernel.score_rows)]:
        original = knn.score_rows
        knn.score_rows = fn
        try:
            # fresh pack per backend keeps the comparison honest
            model._pack.clear()
            elapsed, sink = run(model, probes, backend)
        finally:
            knn.score_rows = original
        results[backend] = elapsed
        per_query = elapsed / n_queries * 1e3
        print(f"{backend:>7}: {elapsed:8.3f}s total, {per_query:7.3f} ms/query "
              f"(checksum {sink:.4f})")

    active_name = simkernel.BACKEND
    if active_name == "compiled":
        print(f"speedup: {results['pure'] / results['active']:.1f}x "
              f"(compiled vs pure, {n_rows} rows, {n_queries} queries)")
    else:
        print("compiled kernel unavailable; both runs used the pure scorer")


if __name__ == "__main__":
    main()
