# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled scoring loop: cosine of a dense query against CSR rows."""


def score_rows(long long[::1] indptr, long long[::1] indices,
               double[::1] weights, double[::1] norms,
               double[::1] qdense, double qnorm, double[::1] out):
    cdef Py_ssize_t n_rows = norms.shape[0]
    cdef Py_ssize_t i, j, start, end
    cdef double dot, denom
    for i in range(n_rows):
        dot = 0.0
        start = indptr[i]
        end = indptr[i + 1]
        for j in range(start, end):
            dot += weights[j] * qdense[indices[j]]
        denom = norms[i] * qnorm
        out[i] = dot / denom if denom > 0.0 and dot != 0.0 else 0.0
    return out
