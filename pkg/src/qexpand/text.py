"""Tokenization and normalization shared by indexing, querying and thesaurus loading."""

from __future__ import annotations

import hashlib
import json
import re
import unicodedata
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

_DIACRITICS = re.compile("[ً-ٰٟ]")
_ALEF_YA = str.maketrans({"أ": "ا", "إ": "ا", "آ": "ا", "ى": "ي"})


@dataclass(frozen=True)
class AnalyzerConfig:
    lowercase: bool = True
    strip_diacritics: bool = True
    normalize_alef_ya: bool = True
    stopwords: frozenset[str] = field(default_factory=frozenset)
    min_token_length: int = 1

    def __post_init__(self):
        if self.min_token_length < 1:
            raise ValueError("min_token_length must be >= 1")
        # stopwords are compared against normalized tokens, so store them normalized
        bare = AnalyzerConfig(self.lowercase, self.strip_diacritics, self.normalize_alef_ya,
                              frozenset(), 1) if self.stopwords else None
        if bare is not None:
            folded = frozenset(w for w in (normalize(s, bare) for s in self.stopwords) if w)
            object.__setattr__(self, "stopwords", folded)

    @classmethod
    def identity(cls) -> "AnalyzerConfig":
        return cls(lowercase=False, strip_diacritics=False, normalize_alef_ya=False)

    def to_dict(self) -> dict:
        return {
            "lowercase": self.lowercase,
            "strip_diacritics": self.strip_diacritics,
            "normalize_alef_ya": self.normalize_alef_ya,
            "stopwords": sorted(self.stopwords),
            "min_token_length": self.min_token_length,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "AnalyzerConfig":
        return cls(
            lowercase=bool(d["lowercase"]),
            strip_diacritics=bool(d["strip_diacritics"]),
            normalize_alef_ya=bool(d["normalize_alef_ya"]),
            stopwords=frozenset(d.get("stopwords", ())),
            min_token_length=int(d.get("min_token_length", 1)),
        )

    def fingerprint(self) -> str:
        """Stable hash of the configuration, recorded in index manifests."""
        blob = json.dumps(self.to_dict(), ensure_ascii=False, sort_keys=True)
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def load_stopwords(path: str | Path) -> frozenset[str]:
    """Read a stopword file: UTF-8, one term per line, blank lines ignored."""
    text = Path(path).read_text(encoding="utf-8")
    return frozenset(line.strip() for line in text.splitlines() if line.strip())


def _is_punct(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def _strip_punct(tok: str) -> str:
    i, j = 0, len(tok)
    while i < j and _is_punct(tok[i]):
        i += 1
    while j > i and _is_punct(tok[j - 1]):
        j -= 1
    return tok[i:j]


def tokenize(text: str) -> list[str]:
    """Split on Unicode whitespace and trim punctuation off both ends of each token."""
    out = []
    for raw in text.split():
        tok = _strip_punct(raw)
        if tok:
            out.append(tok)
    return out


def normalize(token: str, cfg: AnalyzerConfig) -> str | None:
    """Fold one raw token into an index term, or return None if it should be dropped."""
    t = token
    if cfg.lowercase:
        t = t.casefold()
    if cfg.strip_diacritics:
        t = _DIACRITICS.sub("", t)
    if cfg.normalize_alef_ya:
        t = t.translate(_ALEF_YA)
    # removing diacritics can expose punctuation at the edges; re-trim so terms are fixed points
    t = _strip_punct(t)
    if not t or len(t) < cfg.min_token_length or t in cfg.stopwords:
        return None
    return t


def analyze(text: str, cfg: AnalyzerConfig) -> list[str]:
    terms = []
    for tok in tokenize(text):
        t = normalize(tok, cfg)
        if t is not None:
            terms.append(t)
    return terms


def analyze_phrase(phrase: str, cfg: AnalyzerConfig) -> str | None:
    """Analyze a possibly multiword phrase and rejoin its terms with single spaces."""
    terms = analyze(phrase, cfg)
    return " ".join(terms) if terms else None


def unique(terms: Iterable[str]) -> list[str]:
    """Collapse duplicates, keeping first-occurrence order."""
    return list(dict.fromkeys(terms))
