"""Experiment configuration and query files.

Configuration is an INI-style key-value file::

    [experiment]
    corpus = corpus/
    index = build/index
    queries = queries.tsv
    qrels = qrels.txt
    thesaurus = synsets.tsv
    d = 15
    t = 7
    k = 1000
    k_levels = 5, 10, 20, 100

    [analyzer]
    lowercase = true
    strip_diacritics = true
    normalize_alef_ya = true
    stopwords = stopwords.txt
    min_token_length = 1

Relative paths are resolved against the directory of the config file.
Command-line flags override file values.
"""

from __future__ import annotations

import configparser
import re
from dataclasses import dataclass, field, replace
from pathlib import Path

from .errors import DataError
from .evaluation import DEFAULT_K_LEVELS
from .expansion import PrfParams, Query
from .text import AnalyzerConfig, analyze, load_stopwords


@dataclass(frozen=True)
class ExperimentConfig:
    corpus_dir: Path | None = None
    index_dir: Path | None = None
    queries_path: Path | None = None
    qrels_path: Path | None = None
    thesaurus_path: Path | None = None
    analyzer: AnalyzerConfig = field(default_factory=AnalyzerConfig)
    analyzer_explicit: bool = False
    prf: PrfParams = field(default_factory=PrfParams)
    k_retrieve: int = 1000
    k_levels: tuple[int, ...] = DEFAULT_K_LEVELS

    def __post_init__(self):
        if self.k_retrieve < 1:
            raise DataError("k must be >= 1")
        if self.k_levels and self.k_retrieve < max(self.k_levels):
            raise DataError(f"k ({self.k_retrieve}) must be >= the largest k level ({max(self.k_levels)})")

    def override(self, **changes) -> "ExperimentConfig":
        return replace(self, **{k: v for k, v in changes.items() if v is not None})


_BOOL = {"true": True, "yes": True, "on": True, "1": True,
         "false": False, "no": False, "off": False, "0": False}


def load_config(path: str | Path) -> ExperimentConfig:
    path = Path(path)
    parser = configparser.ConfigParser(interpolation=None)
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except FileNotFoundError:
        raise DataError(f"config file not found: {path}") from None
    except configparser.Error as e:
        raise DataError(f"{path}: {e}") from None
    base = path.parent
    exp = parser["experiment"] if parser.has_section("experiment") else {}

    def p(key):
        v = exp.get(key)
        return (base / v).resolve() if v else None

    def i(section, key, default):
        v = section.get(key)
        if v is None:
            return default
        try:
            return int(v)
        except ValueError:
            raise DataError(f"{path}: {key} must be an integer, got {v!r}") from None

    analyzer = AnalyzerConfig()
    explicit = parser.has_section("analyzer")
    if explicit:
        sec = parser["analyzer"]
        flags = {}
        for key in ("lowercase", "strip_diacritics", "normalize_alef_ya"):
            v = sec.get(key)
            if v is not None:
                if v.lower() not in _BOOL:
                    raise DataError(f"{path}: {key} must be a boolean, got {v!r}")
                flags[key] = _BOOL[v.lower()]
        stop = sec.get("stopwords")
        analyzer = AnalyzerConfig(
            **flags,
            stopwords=load_stopwords(base / stop) if stop else frozenset(),
            min_token_length=i(sec, "min_token_length", 1),
        )

    k_levels = DEFAULT_K_LEVELS
    if exp.get("k_levels"):
        try:
            k_levels = tuple(int(x) for x in exp["k_levels"].split(","))
        except ValueError:
            raise DataError(f"{path}: k_levels must be a comma-separated list of integers") from None

    d = i(exp, "d", 15)
    return ExperimentConfig(
        corpus_dir=p("corpus"),
        index_dir=p("index"),
        queries_path=p("queries"),
        qrels_path=p("qrels"),
        thesaurus_path=p("thesaurus"),
        analyzer=analyzer,
        analyzer_explicit=explicit,
        prf=PrfParams(d=d, t=i(exp, "t", 7), k_sample=i(exp, "k_sample", None)),
        k_retrieve=i(exp, "k", 1000),
        k_levels=k_levels,
    )


def parse_queries(text: str, cfg: AnalyzerConfig, source: str = "<queries>") -> list[Query]:
    """Parse ``qid<TAB>query text`` lines, skipping blanks and ``#`` comments."""
    queries = []
    seen = set()
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        qid, sep, body = line.partition("\t")
        qid = qid.strip()
        if not sep or not qid or re.search(r"\s", qid):
            raise DataError(f"{source}:{lineno}: expected 'qid<TAB>query text'")
        if qid in seen:
            raise DataError(f"{source}:{lineno}: duplicate query id {qid!r}")
        seen.add(qid)
        queries.append(Query(qid, tuple(analyze(body, cfg))))
    return queries


def load_queries(path: str | Path, cfg: AnalyzerConfig) -> list[Query]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except FileNotFoundError:
        raise DataError(f"queries file not found: {path}") from None
    except UnicodeDecodeError as e:
        raise DataError(f"{path}: not valid UTF-8 ({e.reason})") from None
    return parse_queries(text, cfg, str(path))
