"""Inverted index with a forward (document → terms) view and BM25 ranking."""

from __future__ import annotations

import json
import logging
import math
import os
from collections import Counter
from pathlib import Path
from typing import Iterable, NamedTuple

import numpy as np

from . import kernels
from .errors import DataError, UnknownDocumentError
from .text import AnalyzerConfig, analyze, unique

log = logging.getLogger(__name__)

K1 = 1.2
B = 0.75
FORMAT_VERSION = 1

_ARRAYS = ("post_ptr", "post_doc", "post_tf", "fwd_ptr", "fwd_term", "fwd_tf", "doc_len")


class Posting(NamedTuple):
    doc: str
    tf: int


class ScoredHit(NamedTuple):
    doc: str
    score: float


def bm25_idf(n_docs: int, df: int) -> float:
    return math.log(1.0 + (n_docs - df + 0.5) / (df + 0.5))


class InvertedIndex:
    """Immutable index over a fixed document set.

    Terms and documents are numbered in sorted order. Postings and the forward
    view are stored as CSR arrays::

        post_ptr[t] : post_ptr[t+1]   -> post_doc, post_tf   (docs ascending)
        fwd_ptr[d]  : fwd_ptr[d+1]    -> fwd_term, fwd_tf    (term ids ascending)
    """

    def __init__(self, terms, doc_ids, arrays, analyzer: AnalyzerConfig):
        self.terms: list[str] = list(terms)
        self.doc_ids: list[str] = list(doc_ids)
        self.analyzer = analyzer
        self.term_index = {t: i for i, t in enumerate(self.terms)}
        self.doc_index = {d: i for i, d in enumerate(self.doc_ids)}
        for name in _ARRAYS:
            setattr(self, name, arrays[name])
        self.df_array = np.diff(self.post_ptr).astype(np.int64)
        n = len(self.doc_ids)
        total = int(self.doc_len.sum())
        self.avgdl = total / n if n and total else 1.0
        self.idf = np.array([bm25_idf(n, int(x)) for x in self.df_array], dtype=np.float64)

    @property
    def n_docs(self) -> int:
        return len(self.doc_ids)

    @property
    def vocabulary(self) -> list[str]:
        return self.terms

    def df(self, term: str) -> int:
        i = self.term_index.get(term)
        return 0 if i is None else int(self.df_array[i])

    def doc_length(self, doc: str) -> int:
        return int(self.doc_len[self.doc_number(doc)])

    def postings(self, term: str) -> list[Posting]:
        i = self.term_index.get(term)
        if i is None:
            return []
        lo, hi = self.post_ptr[i], self.post_ptr[i + 1]
        return [Posting(self.doc_ids[d], int(f))
                for d, f in zip(self.post_doc[lo:hi].tolist(), self.post_tf[lo:hi].tolist())]

    def doc_number(self, doc: str) -> int:
        try:
            return self.doc_index[doc]
        except KeyError:
            raise UnknownDocumentError(doc) from None

    def term_freq(self, term: str, doc: str) -> int:
        d = self.doc_number(doc)
        t = self.term_index.get(term)
        if t is None:
            return 0
        lo, hi = self.fwd_ptr[d], self.fwd_ptr[d + 1]
        row = self.fwd_term[lo:hi]
        k = int(np.searchsorted(row, t))
        if k < row.shape[0] and row[k] == t:
            return int(self.fwd_tf[lo + k])
        return 0

    def doc_terms(self, doc: str) -> dict[str, int]:
        d = self.doc_number(doc)
        lo, hi = self.fwd_ptr[d], self.fwd_ptr[d + 1]
        return {self.terms[t]: int(f)
                for t, f in zip(self.fwd_term[lo:hi].tolist(), self.fwd_tf[lo:hi].tolist())}

    def search(self, terms: Iterable[str], k: int) -> list[ScoredHit]:
        """Top-``k`` documents by BM25 over the distinct query terms.

        Ties are broken by ascending document id. Only documents containing at
        least one query term are returned.
        """
        if k < 1:
            raise ValueError("k must be >= 1")
        ids = [self.term_index[t] for t in unique(terms) if t in self.term_index]
        if not ids:
            return []
        scores, matched = kernels.bm25_scores(
            self.post_ptr, self.post_doc, self.post_tf, self.doc_len, float(self.avgdl),
            np.asarray(ids, dtype=np.int32), self.idf, K1, B)
        hits = np.flatnonzero(matched)
        # doc numbering follows sorted DocId, so ascending index is the id tie-break
        order = np.lexsort((hits, -scores[hits]))[:k]
        return [ScoredHit(self.doc_ids[i], float(scores[i])) for i in hits[order].tolist()]

    def save(self, path: str | Path, force: bool = False) -> None:
        """Write the index as a directory: ``manifest.json``, vocab/doc JSON, one ``.npy`` per array."""
        path = Path(path)
        if path.exists() and any(path.iterdir()) and not force:
            raise FileExistsError(f"index directory not empty: {path} (use --force to overwrite)")
        path.mkdir(parents=True, exist_ok=True)
        manifest = {
            "format_version": FORMAT_VERSION,
            "n_docs": self.n_docs,
            "n_terms": len(self.terms),
            "n_postings": int(self.post_doc.shape[0]),
            "analyzer": self.analyzer.to_dict(),
            "analyzer_fingerprint": self.analyzer.fingerprint(),
            "bm25": {"k1": K1, "b": B},
        }
        _write_json(path / "manifest.json", manifest)
        _write_json(path / "vocab.json", self.terms)
        _write_json(path / "docs.json", self.doc_ids)
        for name in _ARRAYS:
            np.save(path / f"{name}.npy", getattr(self, name), allow_pickle=False)

    @classmethod
    def load(cls, path: str | Path, expected: AnalyzerConfig | None = None) -> "InvertedIndex":
        path = Path(path)
        try:
            manifest = json.loads((path / "manifest.json").read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise DataError(f"no index found at {path}") from None
        if manifest.get("format_version") != FORMAT_VERSION:
            raise DataError(f"unsupported index format in {path}")
        analyzer = AnalyzerConfig.from_dict(manifest["analyzer"])
        if analyzer.fingerprint() != manifest["analyzer_fingerprint"]:
            raise DataError(f"corrupt manifest in {path}: analyzer fingerprint mismatch")
        if expected is not None and expected.fingerprint() != analyzer.fingerprint():
            raise DataError(
                f"analyzer configuration differs from the one the index at {path} was built with")
        terms = json.loads((path / "vocab.json").read_text(encoding="utf-8"))
        docs = json.loads((path / "docs.json").read_text(encoding="utf-8"))
        arrays = {name: np.load(path / f"{name}.npy", allow_pickle=False) for name in _ARRAYS}
        if len(docs) != manifest["n_docs"] or len(terms) != manifest["n_terms"]:
            raise DataError(f"corrupt index at {path}: manifest counts do not match")
        return cls(terms, docs, arrays, analyzer)


def _write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, ensure_ascii=False, indent=1) + "\n", encoding="utf-8")


def doc_id_for(root: Path, file: Path) -> str:
    rel = file.relative_to(root).with_suffix("")
    return rel.as_posix()


def discover(corpus_dir: str | Path) -> list[tuple[str, Path]]:
    """All ``.txt`` files under ``corpus_dir``, as (DocId, path) sorted by DocId."""
    root = Path(corpus_dir)
    if not root.is_dir():
        raise DataError(f"corpus directory not found or not a directory: {root}")
    try:
        os.listdir(root)
    except OSError as e:
        raise DataError(f"cannot read corpus directory {root}: {e.strerror}") from None
    found = {}
    for dirpath, dirnames, filenames in os.walk(root, onerror=_raise_walk):
        dirnames.sort()
        for name in filenames:
            if name.endswith(".txt"):
                p = Path(dirpath) / name
                found[doc_id_for(root, p)] = p
    return sorted(found.items())


def _raise_walk(err: OSError):
    raise DataError(f"cannot read directory {err.filename}: {err.strerror}")


def build_from_texts(docs: dict[str, str] | Iterable[tuple[str, str]], cfg: AnalyzerConfig) -> InvertedIndex:
    """Index in-memory documents given as DocId → text."""
    items = sorted(dict(docs).items())
    if not items:
        raise DataError("no documents found")
    counts = [Counter(analyze(text, cfg)) for _, text in items]
    return _assemble([d for d, _ in items], counts, cfg)


def build_index(corpus_dir: str | Path, cfg: AnalyzerConfig) -> InvertedIndex:
    doc_ids = []
    counts = []
    for doc_id, p in discover(corpus_dir):
        try:
            text = p.read_text(encoding="utf-8")
        except UnicodeDecodeError:
            log.warning("skipping %s: not valid UTF-8", p)
            continue
        except OSError as e:
            log.warning("skipping %s: %s", p, e.strerror)
            continue
        doc_ids.append(doc_id)
        counts.append(Counter(analyze(text, cfg)))
    if not doc_ids:
        raise DataError(f"no documents found in {corpus_dir}")
    return _assemble(doc_ids, counts, cfg)


def _assemble(doc_ids: list[str], counts: list[Counter], cfg: AnalyzerConfig) -> InvertedIndex:
    terms = sorted(set().union(*counts))
    tid = {t: i for i, t in enumerate(terms)}

    fwd_ptr = np.zeros(len(doc_ids) + 1, dtype=np.int64)
    fwd_term, fwd_tf = [], []
    for d, c in enumerate(counts):
        row = sorted((tid[t], f) for t, f in c.items())
        fwd_term.extend(t for t, _ in row)
        fwd_tf.extend(f for _, f in row)
        fwd_ptr[d + 1] = len(fwd_term)
    fwd_term = np.asarray(fwd_term, dtype=np.int32)
    fwd_tf = np.asarray(fwd_tf, dtype=np.int32)
    fwd_doc = np.repeat(np.arange(len(doc_ids), dtype=np.int32), np.diff(fwd_ptr))

    order = np.argsort(fwd_term, kind="stable")
    post_doc = fwd_doc[order]
    post_tf = fwd_tf[order]
    post_ptr = np.zeros(len(terms) + 1, dtype=np.int64)
    np.cumsum(np.bincount(fwd_term, minlength=len(terms)), out=post_ptr[1:])

    doc_len = np.array([sum(c.values()) for c in counts], dtype=np.int64)
    arrays = dict(post_ptr=post_ptr, post_doc=post_doc, post_tf=post_tf,
                  fwd_ptr=fwd_ptr, fwd_term=fwd_term, fwd_tf=fwd_tf, doc_len=doc_len)
    return InvertedIndex(terms, doc_ids, arrays, cfg)


def search(index: InvertedIndex, terms: Iterable[str], k: int) -> list[ScoredHit]:
    return index.search(terms, k)


def term_freq(index: InvertedIndex, term: str, doc: str) -> int:
    return index.term_freq(term, doc)


def doc_terms(index: InvertedIndex, doc: str) -> dict[str, int]:
    return index.doc_terms(doc)
