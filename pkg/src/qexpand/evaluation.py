"""Run evaluation: P@k, 11-point interpolated precision, before/after classification."""

from __future__ import annotations

import csv
import enum
import io
import json
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .errors import DataError

RECALL_LEVELS = tuple(i / 10 for i in range(11))
DEFAULT_K_LEVELS = (5, 10, 20, 100)


class ImprovementTag(str, enum.Enum):
    IMPROVEMENT = "+"
    NO_IMPROVEMENT = "-"
    NO_DECISION = "X"


TAG_ORDER = (ImprovementTag.IMPROVEMENT, ImprovementTag.NO_IMPROVEMENT, ImprovementTag.NO_DECISION)


# --- TREC files -------------------------------------------------------------

Qrels = dict  # qid -> {docid: relevance}


def parse_qrels(text: str, source: str = "<qrels>") -> Qrels:
    """Parse ``qid iter docid rel`` lines. Relevance > 0 counts as relevant."""
    qrels: Qrels = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 4:
            raise DataError(f"{source}:{lineno}: expected 'qid iter docid rel', got {len(parts)} fields")
        qid, _, doc, rel = parts
        try:
            rel = int(rel)
        except ValueError:
            raise DataError(f"{source}:{lineno}: relevance must be an integer, got {rel!r}") from None
        qrels.setdefault(qid, {})[doc] = rel
    return qrels


def load_qrels(path: str | Path) -> Qrels:
    return parse_qrels(_read(path), str(path))


def relevant_docs(qrels: Qrels, qid: str) -> set[str]:
    return {d for d, r in qrels.get(qid, {}).items() if r > 0}


@dataclass
class RunResult:
    """Ranked results per query, each list ordered by score desc then DocId asc."""

    tag: str
    queries: dict[str, list[tuple[str, float]]] = field(default_factory=dict)

    def ranked(self, qid: str) -> list[str]:
        return [d for d, _ in self.queries.get(qid, ())]


def parse_run(text: str, source: str = "<run>") -> RunResult:
    """Parse ``qid Q0 docid rank score tag`` lines; rankings are re-sorted by score."""
    queries: dict[str, dict[str, float]] = {}
    tag = None
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 6:
            raise DataError(f"{source}:{lineno}: expected 'qid Q0 docid rank score tag', got {len(parts)} fields")
        qid, _, doc, rank, score, run_tag = parts
        try:
            int(rank)
            score = float(score)
        except ValueError:
            raise DataError(f"{source}:{lineno}: bad rank or score") from None
        if not math.isfinite(score):
            raise DataError(f"{source}:{lineno}: score must be finite")
        docs = queries.setdefault(qid, {})
        if doc in docs:
            raise DataError(f"{source}:{lineno}: document {doc!r} listed twice for query {qid!r}")
        docs[doc] = score
        tag = tag or run_tag
    run = RunResult(tag or "run")
    for qid, docs in queries.items():
        run.queries[qid] = sorted(docs.items(), key=lambda ds: (-ds[1], ds[0]))
    return run


def load_run(path: str | Path) -> RunResult:
    return parse_run(_read(path), str(path))


def format_run(run: RunResult) -> str:
    out = io.StringIO()
    for qid, hits in run.queries.items():
        for rank, (doc, score) in enumerate(hits, 1):
            if any(c.isspace() for c in doc) or any(c.isspace() for c in qid):
                raise DataError(f"ids cannot contain whitespace in TREC format: {qid!r} {doc!r}")
            out.write(f"{qid} Q0 {doc} {rank} {score!r} {run.tag}\n")
    return out.getvalue()


def write_run(run: RunResult, path: str | Path) -> None:
    Path(path).write_text(format_run(run), encoding="utf-8")


def _read(path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except FileNotFoundError:
        raise DataError(f"file not found: {path}") from None
    except UnicodeDecodeError as e:
        raise DataError(f"{path}: not valid UTF-8 ({e.reason})") from None


# --- metrics ----------------------------------------------------------------

def precision_at_k(ranked: Sequence[str], rel: set[str], k: int) -> float:
    """Fraction of the top ``k`` that is relevant; short lists still divide by ``k``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return sum(1 for d in ranked[:k] if d in rel) / k


def interpolated_pr_curve(ranked: Sequence[str], rel: set[str]) -> tuple[float, ...]:
    """11-point interpolated precision at recall 0.0, 0.1, ..., 1.0."""
    n_rel = len(rel)
    if n_rel == 0:
        raise DataError("query has no relevant documents")
    # (hits, rank) at each relevant document; precision only rises at these ranks
    points = []
    hits = 0
    for r, d in enumerate(ranked, 1):
        if d in rel:
            hits += 1
            points.append((hits, r))
    curve = []
    best = 0.0
    j = len(points) - 1
    for i in range(10, -1, -1):
        # recall(hits) >= i/10  <=>  10*hits >= i*n_rel
        while j >= 0 and 10 * points[j][0] >= i * n_rel:
            best = max(best, points[j][0] / points[j][1])
            j -= 1
        curve.append(best)
    return tuple(reversed(curve))


def classify_improvement(before: Sequence[float], after: Sequence[float]) -> ImprovementTag:
    """``+`` if after is strictly above before at every point, ``-`` if strictly below, else ``X``."""
    if len(before) != len(after):
        raise ValueError("curves must have the same number of points")
    if all(a > b for a, b in zip(after, before)):
        return ImprovementTag.IMPROVEMENT
    if all(a < b for a, b in zip(after, before)):
        return ImprovementTag.NO_IMPROVEMENT
    return ImprovementTag.NO_DECISION


def round_percent(count: int, total: int) -> int:
    """``100 * count / total`` rounded half-up to a whole percent, in exact integer arithmetic."""
    return (200 * count + total) // (2 * total)


def aggregate_classification(tags: Iterable[ImprovementTag | str]) -> dict[str, tuple[int, int]]:
    """Map each tag (``+``, ``-``, ``X``) to ``(count, percent)``."""
    tags = [ImprovementTag(t) for t in tags]
    if not tags:
        raise ValueError("no tags to aggregate")
    n = len(tags)
    return {t.value: (tags.count(t), round_percent(tags.count(t), n)) for t in TAG_ORDER}


# --- reports ----------------------------------------------------------------

@dataclass
class QueryEval:
    n_rel: int
    n_ret: int
    precision: dict[int, float]
    curve: tuple[float, ...]


@dataclass
class EvalReport:
    tag: str
    k_levels: tuple[int, ...]
    per_query: dict[str, QueryEval]
    mean_precision: dict[int, float]
    mean_curve: tuple[float, ...]
    warnings: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "tag": self.tag,
            "k_levels": list(self.k_levels),
            "recall_levels": list(RECALL_LEVELS),
            "n_queries": len(self.per_query),
            "mean": {
                "precision_at": {str(k): v for k, v in self.mean_precision.items()},
                "interpolated_precision": list(self.mean_curve),
            },
            "queries": {
                qid: {
                    "n_rel": q.n_rel,
                    "n_ret": q.n_ret,
                    "precision_at": {str(k): v for k, v in q.precision.items()},
                    "interpolated_precision": list(q.curve),
                }
                for qid, q in self.per_query.items()
            },
            "warnings": list(self.warnings),
        }


def qid_key(qid: str):
    """Natural sort key, so that ``q2`` sorts before ``q10``."""
    return [(0, int(p), "") if p.isdigit() else (1, 0, p) for p in re.split(r"(\d+)", qid) if p]


def _mean(values: list[float]) -> float:
    return math.fsum(values) / len(values)


def evaluate_run(run: RunResult, qrels: Qrels, k_levels: Sequence[int] = DEFAULT_K_LEVELS) -> EvalReport:
    """Score every judged query (at least one relevant document) against the run.

    Judged queries absent from the run are scored as empty rankings; run queries
    without judgments are excluded. Both cases are recorded in ``warnings``.
    """
    k_levels = tuple(k_levels)
    warnings = []
    judged = sorted((q for q in qrels if relevant_docs(qrels, q)), key=qid_key)
    for qid in sorted(set(qrels) - set(judged)):
        warnings.append(f"query {qid}: no relevant documents in qrels, excluded")
    for qid in sorted(set(run.queries) - set(qrels)):
        warnings.append(f"query {qid}: not in qrels, excluded")
    if not set(judged) & set(run.queries):
        raise DataError("run and qrels share no evaluable queries")
    per_query = {}
    for qid in judged:
        if qid not in run.queries:
            warnings.append(f"query {qid}: no results in run, scored as empty ranking")
        ranked = run.ranked(qid)
        rel = relevant_docs(qrels, qid)
        per_query[qid] = QueryEval(
            n_rel=len(rel),
            n_ret=len(ranked),
            precision={k: precision_at_k(ranked, rel, k) for k in k_levels},
            curve=interpolated_pr_curve(ranked, rel),
        )
    qs = list(per_query.values())
    mean_p = {k: _mean([q.precision[k] for q in qs]) for k in k_levels}
    mean_curve = tuple(_mean([q.curve[i] for q in qs]) for i in range(len(RECALL_LEVELS)))
    return EvalReport(run.tag, k_levels, per_query, mean_p, mean_curve, warnings)


@dataclass
class ComparisonReport:
    baseline: EvalReport
    variant: EvalReport
    tags: dict[str, ImprovementTag]
    summary: dict[str, tuple[int, int]]

    @property
    def precision_deltas(self) -> dict[int, float]:
        return {k: self.variant.mean_precision[k] - self.baseline.mean_precision[k]
                for k in self.baseline.k_levels}

    def to_dict(self) -> dict:
        return {
            "baseline": self.baseline.tag,
            "variant": self.variant.tag,
            "n_queries": len(self.tags),
            "summary": {t: {"count": c, "percent": p} for t, (c, p) in self.summary.items()},
            "mean_interpolated_precision": {
                "recall_levels": list(RECALL_LEVELS),
                "baseline": list(self.baseline.mean_curve),
                "variant": list(self.variant.mean_curve),
            },
            "mean_precision_at": {
                str(k): {
                    "baseline": self.baseline.mean_precision[k],
                    "variant": self.variant.mean_precision[k],
                    "delta": d,
                }
                for k, d in self.precision_deltas.items()
            },
            "queries": {qid: t.value for qid, t in self.tags.items()},
        }


def compare_runs(baseline: EvalReport, variant: EvalReport) -> ComparisonReport:
    a, b = set(baseline.per_query), set(variant.per_query)
    if a != b:
        raise DataError(
            "query sets differ: only in baseline %s; only in variant %s"
            % (sorted(a - b), sorted(b - a)))
    if tuple(baseline.k_levels) != tuple(variant.k_levels):
        raise DataError("reports were computed with different k levels")
    tags = {qid: classify_improvement(baseline.per_query[qid].curve, variant.per_query[qid].curve)
            for qid in baseline.per_query}
    return ComparisonReport(baseline, variant, tags, aggregate_classification(tags.values()))


# --- report files -----------------------------------------------------------

def _fmt(x: float) -> str:
    return f"{x:.4f}"


def eval_csv(report: EvalReport) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["qid", "n_rel", "n_ret"]
               + [f"P@{k}" for k in report.k_levels]
               + [f"iP@{r:.1f}" for r in RECALL_LEVELS])
    for qid, q in report.per_query.items():
        w.writerow([qid, q.n_rel, q.n_ret]
                   + [_fmt(q.precision[k]) for k in report.k_levels]
                   + [_fmt(p) for p in q.curve])
    w.writerow(["all", sum(q.n_rel for q in report.per_query.values()),
                sum(q.n_ret for q in report.per_query.values())]
               + [_fmt(report.mean_precision[k]) for k in report.k_levels]
               + [_fmt(p) for p in report.mean_curve])
    return out.getvalue()


def compare_csv(cmp: ComparisonReport) -> str:
    """Per-query tags and curves, a ``mean`` row, then one ``summary`` row per tag."""
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    levels = [f"{r:.1f}" for r in RECALL_LEVELS]
    w.writerow(["qid", "tag", "count", "percent"]
               + [f"{side}_iP@{r}" for r in levels for side in ("baseline", "variant")])
    blank = [""] * (2 * len(levels))
    for qid, tag in cmp.tags.items():
        bc, vc = cmp.baseline.per_query[qid].curve, cmp.variant.per_query[qid].curve
        w.writerow([qid, tag.value, "", ""] + [_fmt(x) for pair in zip(bc, vc) for x in pair])
    w.writerow(["mean", "", "", ""]
               + [_fmt(x) for pair in zip(cmp.baseline.mean_curve, cmp.variant.mean_curve) for x in pair])
    for tag, (count, pct) in cmp.summary.items():
        w.writerow(["summary", tag, count, pct] + blank)
    return out.getvalue()


def write_json(obj: dict, path: str | Path) -> None:
    Path(path).write_text(json.dumps(obj, ensure_ascii=False, indent=2) + "\n", encoding="utf-8")
