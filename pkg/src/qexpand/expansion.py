"""Query reformulation: thesaurus (concept-based) and pseudo-relevance feedback."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from . import kernels
from .errors import DataError
from .index import InvertedIndex
from .text import AnalyzerConfig, analyze, unique
from .thesaurus import Thesaurus


@dataclass(frozen=True)
class Query:
    qid: str
    terms: tuple[str, ...]

    def __post_init__(self):
        if not self.qid:
            raise ValueError("qid must be non-empty")
        object.__setattr__(self, "terms", tuple(unique(self.terms)))

    @classmethod
    def from_text(cls, qid: str, text: str, cfg: AnalyzerConfig) -> "Query":
        return cls(qid, tuple(analyze(text, cfg)))

    def union(self, extra: Iterable[str]) -> "Query":
        return Query(self.qid, self.terms + tuple(extra))


@dataclass(frozen=True)
class PrfParams:
    d: int = 15
    t: int = 7
    k_sample: int | None = None

    def __post_init__(self):
        if self.d < 1 or self.t < 1:
            raise ValueError("PRF parameters d and t must be >= 1")
        if self.k_sample is None:
            object.__setattr__(self, "k_sample", max(self.d, 100))
        elif self.k_sample < self.d:
            raise ValueError("k_sample must be >= d")


def expand_cb(q: Query, th: Thesaurus) -> Query:
    """Union the query with the thesaurus synonyms of each of its terms.

    Multiword synonyms contribute each of their words. Added terms follow the
    position of the query term they came from, then lexicographic order.
    """
    added = []
    for t in q.terms:
        words = {w for syn in th.synonyms(t) for w in syn.split()}
        added.extend(sorted(words))
    return q.union(added)


def sample_top_docs(index: InvertedIndex, q: Query, d: int) -> list[str]:
    if d < 1:
        raise ValueError("d must be >= 1")
    return [h.doc for h in index.search(q.terms, d)]


@dataclass
class AssociationMatrix:
    """Sparse symmetric term-term co-occurrence scores over a local document set.

    ``scores[u, v] = sum over local docs of tf(u, d) * tf(v, d)``. Stored as CSR
    over ``vocab`` (sorted); zero entries are absent.
    """

    vocab: list[str]
    indptr: np.ndarray
    indices: np.ndarray
    data: np.ndarray
    _pos: dict = field(init=False, repr=False)

    def __post_init__(self):
        self._pos = {t: i for i, t in enumerate(self.vocab)}

    def __contains__(self, term):
        return term in self._pos

    @property
    def nnz(self) -> int:
        return int(self.data.shape[0])

    def row(self, u: str) -> dict[str, int]:
        i = self._pos.get(u)
        if i is None:
            return {}
        lo, hi = self.indptr[i], self.indptr[i + 1]
        return {self.vocab[j]: int(s) for j, s in zip(self.indices[lo:hi].tolist(), self.data[lo:hi].tolist())}

    def score(self, u: str, v: str) -> int:
        i, j = self._pos.get(u), self._pos.get(v)
        if i is None or j is None:
            return 0
        lo, hi = self.indptr[i], self.indptr[i + 1]
        cols = self.indices[lo:hi]
        k = int(np.searchsorted(cols, j))
        return int(self.data[lo + k]) if k < cols.shape[0] and cols[k] == j else 0

    def to_dict(self) -> dict[tuple[str, str], int]:
        out = {}
        for i, u in enumerate(self.vocab):
            for v, s in self.row(u).items():
                out[u, v] = s
        return out


def build_association_matrix(index: InvertedIndex, docs: Iterable[str]) -> AssociationMatrix:
    docs = unique(docs)
    if not docs:
        raise DataError("association matrix needs at least one document")
    idx = np.asarray([index.doc_number(d) for d in docs], dtype=np.int32)
    local, indptr, indices, data = kernels.association(index.fwd_ptr, index.fwd_term, index.fwd_tf, idx)
    vocab = [index.terms[t] for t in local.tolist()]
    return AssociationMatrix(vocab, indptr, indices, data)


def top_correlates(m: AssociationMatrix, u: str, t: int) -> list[str]:
    """The ``t`` terms most associated with ``u`` (v != u, score > 0), best first, ties by term."""
    if t < 1:
        raise ValueError("t must be >= 1")
    row = m.row(u)
    row.pop(u, None)
    ranked = sorted(row.items(), key=lambda kv: (-kv[1], kv[0]))
    return [v for v, s in ranked[:t] if s > 0]


def expand_prf(index: InvertedIndex, q: Query, p: PrfParams = PrfParams()) -> Query:
    """Add the top-``p.t`` local associates of each query term, mined from the top-``p.d`` documents."""
    local = sample_top_docs(index, q, p.d)
    if not local:
        return q
    m = build_association_matrix(index, local)
    added = []
    for u in q.terms:
        added.extend(top_correlates(m, u, p.t))
    return q.union(added)
