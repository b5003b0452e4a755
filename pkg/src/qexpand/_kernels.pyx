# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels. Same contracts as ``_kernels_py``; outputs are bit-identical."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int32_t, int64_t, uint8_t
from libc.stdlib cimport qsort

cnp.import_array()


def bm25_scores(const int64_t[::1] post_ptr, const int32_t[::1] post_doc,
                const int32_t[::1] post_tf, const int64_t[::1] doc_len,
                double avgdl, const int32_t[::1] term_ids,
                const double[::1] idf, double k1, double b):
    cdef Py_ssize_t n_docs = doc_len.shape[0]
    scores_arr = np.zeros(n_docs, dtype=np.float64)
    matched_arr = np.zeros(n_docs, dtype=np.uint8)
    cdef double[::1] scores = scores_arr
    cdef uint8_t[::1] matched = matched_arr
    cdef Py_ssize_t qi, p, d
    cdef int32_t t
    cdef double tf, dl, norm, w
    for qi in range(term_ids.shape[0]):
        t = term_ids[qi]
        w = idf[t]
        for p in range(post_ptr[t], post_ptr[t + 1]):
            d = post_doc[p]
            tf = <double>post_tf[p]
            dl = <double>doc_len[d]
            norm = k1 * (1.0 - b + b * dl / avgdl)
            scores[d] += w * (tf * (k1 + 1.0)) / (tf + norm)
            matched[d] = 1
    return scores_arr, matched_arr


def association(const int64_t[::1] fwd_ptr, const int32_t[::1] fwd_term,
                const int32_t[::1] fwd_tf, const int32_t[::1] docs):
    cdef Py_ssize_t n_local_docs = docs.shape[0]
    cdef Py_ssize_t j, p, q, u, v, nnz, k
    cdef int64_t fu

    # local vocabulary: sorted distinct term ids across the sampled documents
    chunks = [np.asarray(fwd_term[fwd_ptr[docs[j]]:fwd_ptr[docs[j] + 1]]) for j in range(n_local_docs)]
    if chunks:
        local_arr = np.unique(np.concatenate(chunks)).astype(np.int32)
    else:
        local_arr = np.zeros(0, dtype=np.int32)
    cdef int32_t[::1] local_terms = local_arr
    cdef Py_ssize_t n_local = local_arr.shape[0]

    # column view (per doc): local positions and tf
    col_ptr_arr = np.zeros(n_local_docs + 1, dtype=np.int64)
    cdef int64_t[::1] col_ptr = col_ptr_arr
    for j in range(n_local_docs):
        col_ptr[j + 1] = col_ptr[j] + (fwd_ptr[docs[j] + 1] - fwd_ptr[docs[j]])
    col_pos_arr = np.empty(col_ptr[n_local_docs], dtype=np.int32)
    col_tf_arr = np.empty(col_ptr[n_local_docs], dtype=np.int64)
    cdef int32_t[::1] col_pos = col_pos_arr
    cdef int64_t[::1] col_tf = col_tf_arr
    for j in range(n_local_docs):
        k = col_ptr[j]
        for p in range(fwd_ptr[docs[j]], fwd_ptr[docs[j] + 1]):
            col_pos[k] = _bsearch(local_terms, n_local, fwd_term[p])
            col_tf[k] = fwd_tf[p]
            k += 1

    # row view (per local term): doc positions and tf, docs ascending
    row_ptr_arr = np.zeros(n_local + 1, dtype=np.int64)
    cdef int64_t[::1] row_ptr = row_ptr_arr
    for k in range(col_ptr[n_local_docs]):
        row_ptr[col_pos[k] + 1] += 1
    for u in range(n_local):
        row_ptr[u + 1] += row_ptr[u]
    fill_arr = row_ptr_arr[:-1].copy()
    cdef int64_t[::1] fill = fill_arr
    row_doc_arr = np.empty(col_ptr[n_local_docs], dtype=np.int32)
    row_tf_arr = np.empty(col_ptr[n_local_docs], dtype=np.int64)
    cdef int32_t[::1] row_doc = row_doc_arr
    cdef int64_t[::1] row_tf = row_tf_arr
    for j in range(n_local_docs):
        for k in range(col_ptr[j], col_ptr[j + 1]):
            u = col_pos[k]
            row_doc[fill[u]] = j
            row_tf[fill[u]] = col_tf[k]
            fill[u] += 1

    # Gustavson SpGEMM: pass 1 counts nonzeros per row, pass 2 fills
    marker_arr = np.full(n_local, -1, dtype=np.int64)
    cdef int64_t[::1] marker = marker_arr
    indptr_arr = np.zeros(n_local + 1, dtype=np.int64)
    cdef int64_t[::1] indptr = indptr_arr
    for u in range(n_local):
        nnz = 0
        for p in range(row_ptr[u], row_ptr[u + 1]):
            j = row_doc[p]
            for q in range(col_ptr[j], col_ptr[j + 1]):
                v = col_pos[q]
                if marker[v] != u:
                    marker[v] = u
                    nnz += 1
        indptr[u + 1] = indptr[u] + nnz

    indices_arr = np.empty(indptr[n_local], dtype=np.int32)
    data_arr = np.empty(indptr[n_local], dtype=np.int64)
    cdef int32_t[::1] indices = indices_arr
    cdef int64_t[::1] data = data_arr
    acc_arr = np.zeros(n_local, dtype=np.int64)
    cdef int64_t[::1] acc = acc_arr
    marker_arr.fill(-1)
    for u in range(n_local):
        k = indptr[u]
        for p in range(row_ptr[u], row_ptr[u + 1]):
            j = row_doc[p]
            fu = row_tf[p]
            for q in range(col_ptr[j], col_ptr[j + 1]):
                v = col_pos[q]
                if marker[v] != u:
                    marker[v] = u
                    indices[k] = <int32_t>v
                    k += 1
                    acc[v] = 0
                acc[v] += fu * col_tf[q]
        # rows come out in discovery order; callers expect ascending column indices
        qsort(&indices[indptr[u]], indptr[u + 1] - indptr[u], sizeof(int32_t), _cmp_int32)
        for k in range(indptr[u], indptr[u + 1]):
            data[k] = acc[indices[k]]

    return local_arr, indptr_arr, indices_arr, data_arr


cdef inline Py_ssize_t _bsearch(const int32_t[::1] a, Py_ssize_t n, int32_t x) nogil:
    cdef Py_ssize_t lo = 0, hi = n, mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if a[mid] < x:
            lo = mid + 1
        else:
            hi = mid
    return lo


cdef int _cmp_int32(const void* a, const void* b) noexcept nogil:
    cdef int32_t x = (<const int32_t*>a)[0]
    cdef int32_t y = (<const int32_t*>b)[0]
    return (x > y) - (x < y)
