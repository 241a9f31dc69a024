"""Independent brute-force reimplementation of the k-NN ranking.

Written against the scoring contract only (tf-idf cosine, ln idf, top-k
rows voting grouped by key, recency tie-breaks); shares no code with
the model's CSR/packed scorer. Tests compute expectations here and also
freeze the values they pin.
"""

import math


def idf(df, n, feature):
    return math.log((1 + n) / (1 + df.get(feature, 0)))


def cosine_tfidf(query, row, df, n):
    qw = {f: c * idf(df, n, f) for f, c in query.items()}
    rw = {f: c * idf(df, n, f) for f, c in row.items()}
    dot = sum(w * rw.get(f, 0.0) for f, w in qw.items())
    qn = math.sqrt(sum(w * w for w in qw.values()))
    rn = math.sqrt(sum(w * w for w in rw.values()))
    if qn == 0 or rn == 0 or dot == 0:
        return 0.0
    return dot / (qn * rn)


def rank(rows, query, k):
    """rows: [(bag, key)] in insertion order; returns [(score, key)]."""
    n = len(rows)
    df = {}
    for bag, _ in rows:
        for f in bag:
            df[f] = df.get(f, 0) + 1
    sims = [cosine_tfidf(query, bag, df, n) for bag, _ in rows]
    order = sorted(range(n), key=lambda i: (-sims[i], -i))[:k]
    groups = {}
    for i in order:
        key = rows[i][1]
        if key not in groups:
            groups[key] = [0.0, -1]
        groups[key][0] += sims[i]
        groups[key][1] = max(groups[key][1], i)
    ranked = sorted(((s, latest, key) for key, (s, latest) in groups.items()),
                    key=lambda e: (-e[0], -e[1]))
    return [(s, key) for s, _, key in ranked]
