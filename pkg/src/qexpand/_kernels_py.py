"""Reference kernels in plain Python/numpy.

Used when the compiled ``_kernels`` extension is unavailable. Results must be
identical to the compiled versions, bit for bit, including float scores.
"""

import numpy as np


def bm25_scores(post_ptr, post_doc, post_tf, doc_len, avgdl, term_ids, idf, k1, b):
    """Accumulate BM25 scores over the postings of ``term_ids`` (in the given order).

    Returns ``(scores, matched)``: float64 scores per document and a uint8 mask
    of documents containing at least one of the terms.
    """
    n_docs = doc_len.shape[0]
    scores = np.zeros(n_docs, dtype=np.float64)
    matched = np.zeros(n_docs, dtype=np.uint8)
    for t in term_ids:
        lo, hi = post_ptr[t], post_ptr[t + 1]
        docs = post_doc[lo:hi]
        tf = post_tf[lo:hi].astype(np.float64)
        dl = doc_len[docs].astype(np.float64)
        norm = k1 * (1.0 - b + b * dl / avgdl)
        scores[docs] += idf[t] * (tf * (k1 + 1.0)) / (tf + norm)
        matched[docs] = 1
    return scores, matched


def association(fwd_ptr, fwd_term, fwd_tf, docs):
    """Sparse product F·Fᵀ of the local term-by-document frequency matrix.

    ``docs`` are document indices of the local set. Returns
    ``(local_terms, indptr, indices, data)``: sorted term ids and a CSR matrix
    over positions in ``local_terms`` with int64 co-occurrence scores.
    """
    cols = []
    for d in docs:
        lo, hi = int(fwd_ptr[d]), int(fwd_ptr[d + 1])
        cols.append(list(zip(fwd_term[lo:hi].tolist(), fwd_tf[lo:hi].tolist())))

    local_terms = sorted({t for col in cols for t, _ in col})
    pos = {t: i for i, t in enumerate(local_terms)}
    cols = [[(pos[t], f) for t, f in col] for col in cols]
    rows = [[] for _ in local_terms]
    for j, col in enumerate(cols):
        for u, f in col:
            rows[u].append((j, f))

    indptr = [0]
    indices = []
    data = []
    for u, row in enumerate(rows):
        acc = {}
        for j, fu in row:
            for v, fv in cols[j]:
                acc[v] = acc.get(v, 0) + fu * fv
        for v in sorted(acc):
            indices.append(v)
            data.append(acc[v])
        indptr.append(len(indices))

    return (
        np.asarray(local_terms, dtype=np.int32),
        np.asarray(indptr, dtype=np.int64),
        np.asarray(indices, dtype=np.int32),
        np.asarray(data, dtype=np.int64),
    )
