"""The three retrieval strategies run over a query set."""

from __future__ import annotations

from typing import Sequence

from .evaluation import RunResult
from .expansion import PrfParams, Query, expand_cb, expand_prf
from .index import InvertedIndex
from .thesaurus import Thesaurus

MODES = ("sr", "cb", "prf")


def reformulate(index: InvertedIndex, q: Query, mode: str,
                thesaurus: Thesaurus | None = None, prf: PrfParams = PrfParams()) -> Query:
    if mode == "sr":
        return q
    if mode == "cb":
        if thesaurus is None:
            raise ValueError("mode 'cb' needs a thesaurus")
        return expand_cb(q, thesaurus)
    if mode == "prf":
        return expand_prf(index, q, prf)
    raise ValueError(f"unknown mode {mode!r}")


def execute_run(index: InvertedIndex, queries: Sequence[Query], mode: str, k: int = 1000,
                thesaurus: Thesaurus | None = None,
                prf: PrfParams = PrfParams()) -> tuple[RunResult, list[Query]]:
    """Reformulate each query per ``mode`` and retrieve the top ``k``.

    Returns the run (tagged with the mode name, queries in input order; queries
    without hits are absent) and the reformulated queries.
    """
    run = RunResult(mode)
    expanded = []
    for q in queries:
        eq = reformulate(index, q, mode, thesaurus, prf)
        expanded.append(eq)
        hits = index.search(eq.terms, k)
        if hits:
            run.queries[q.qid] = [(h.doc, h.score) for h in hits]
    return run, expanded


def format_expanded(queries: Sequence[Query]) -> str:
    return "".join(f"{q.qid}\t{' '.join(q.terms)}\n" for q in queries)
