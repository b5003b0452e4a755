"""Synset thesaurus loaded from a TSV file.

One synset per line::

    synset_id<TAB>pos<TAB>member1,member2,...

Lines starting with ``#`` and blank lines are ignored. Members may be
multiword; each word is normalized with the index analyzer and the member is
kept as a space-joined phrase.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path

from .errors import DataError
from .text import AnalyzerConfig, analyze_phrase

log = logging.getLogger(__name__)

POS_TAGS = frozenset({"noun", "verb", "adjective", "adverb", "unknown"})


@dataclass(frozen=True)
class Synset:
    id: str
    members: frozenset[str]
    pos: str = "unknown"


@dataclass
class Thesaurus:
    synsets: list[Synset] = field(default_factory=list)
    by_term: dict[str, set[str]] = field(default_factory=dict)

    def __post_init__(self):
        self._by_id = {s.id: s for s in self.synsets}
        if not self.by_term:
            for s in self.synsets:
                for m in s.members:
                    self.by_term.setdefault(m, set()).add(s.id)

    def __len__(self):
        return len(self.synsets)

    def synonyms(self, term: str) -> set[str]:
        """Members of every synset containing ``term``, excluding ``term`` itself."""
        out = set()
        for sid in self.by_term.get(term, ()):
            out |= self._by_id[sid].members
        out.discard(term)
        return out


def parse_thesaurus(text: str, cfg: AnalyzerConfig, source: str = "<string>") -> Thesaurus:
    synsets = []
    seen = set()
    for lineno, line in enumerate(text.split("\n"), 1):
        line = line.rstrip("\r")
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 3:
            raise DataError(f"{source}:{lineno}: expected 3 tab-separated fields, got {len(fields)}")
        sid, pos, members = (f.strip() for f in fields)
        if not sid:
            raise DataError(f"{source}:{lineno}: empty synset id")
        if pos not in POS_TAGS:
            raise DataError(f"{source}:{lineno}: unknown part of speech {pos!r}")
        if sid in seen:
            raise DataError(f"{source}:{lineno}: duplicate synset id {sid!r}")
        seen.add(sid)
        normed = set()
        for raw in members.split(","):
            if raw.strip():
                m = analyze_phrase(raw, cfg)
                if m is not None:
                    normed.add(m)
        if not normed:
            log.warning("%s:%d: synset %s is empty after normalization, dropped", source, lineno, sid)
            continue
        synsets.append(Synset(sid, frozenset(normed), pos))
    return Thesaurus(synsets)


def load_thesaurus(path: str | Path, cfg: AnalyzerConfig) -> Thesaurus:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise DataError(f"{path}: not valid UTF-8 ({e.reason})") from None
    return parse_thesaurus(text, cfg, source=str(path))


def synonyms(th: Thesaurus, term: str) -> set[str]:
    return th.synonyms(term)
