"""Candidate extraction: dictionary entity linking plus schema type filtering."""
from __future__ import annotations

import logging
import os
from dataclasses import dataclass
from typing import Protocol, Sequence

from .kb import KbcQuery, KnowledgeBase
from .snippets import Snippet
from .text import norm_phrase, norm_tokens

log = logging.getLogger(__name__)

__all__ = [
    "LinkedMention",
    "Linker",
    "DictionaryLinker",
    "RemoteLinker",
    "CandidateAnswer",
    "dictionary_link",
    "find_entity_spans",
    "extract_candidates",
    "split_by_type",
    "type_filter",
]


@dataclass(frozen=True)
class LinkedMention:
    entity: str
    start: int
    end: int
    surface: str

    def __post_init__(self):
        if not 0 <= self.start < self.end:
            raise ValueError(f"bad mention span [{self.start}, {self.end})")

    @property
    def span(self) -> tuple[int, int]:
        return self.start, self.end


class Linker(Protocol):
    def link(self, text: str) -> list[LinkedMention]:
        """Non-overlapping mentions sorted by start offset."""


def _longest_match(toks: Sequence[str], table: dict, max_len: int) -> list[tuple[int, int, tuple]]:
    out = []
    i, n = 0, len(toks)
    while i < n:
        if not toks[i]:
            i += 1
            continue
        for ln in range(min(max_len, n - i), 0, -1):
            key = tuple(toks[i:i + ln])
            if key in table:
                out.append((i, i + ln, key))
                i += ln
                break
        else:
            i += 1
    return out


class DictionaryLinker:
    """Greedy longest-match linker over the KB's label dictionary.

    Matching is case-insensitive on whitespace tokens with edge punctuation
    stripped. A label naming several entities resolves to the one with the most
    facts, then the smallest id.
    """

    def __init__(self, kb: KnowledgeBase):
        self.kb = kb
        self._table: dict[tuple[str, ...], tuple[str, str]] = {}
        for label, ents in kb.labels.items():
            key = norm_phrase(label)
            if not key:
                continue
            best = min(ents, key=lambda e: (-kb.fact_count(e), e))
            prev = self._table.get(key)
            if prev is None or (-kb.fact_count(best), best) < (-kb.fact_count(prev[0]), prev[0]):
                self._table[key] = (best, label)
        self._max_len = max((len(k) for k in self._table), default=0)

    def link(self, text: str) -> list[LinkedMention]:
        toks = norm_tokens(text)
        return [LinkedMention(self._table[key][0], s, e, self._table[key][1])
                for s, e, key in _longest_match(toks, self._table, self._max_len)]


def dictionary_link(kb: KnowledgeBase, text: str) -> list[LinkedMention]:
    return DictionaryLinker(kb).link(text)


def find_entity_spans(kb: KnowledgeBase, entity: str, text: str) -> list[tuple[int, int]]:
    """Token spans in ``text`` where any surface form of ``entity`` occurs."""
    table = {norm_phrase(f): f for f in kb.surface_forms(entity)}
    table.pop((), None)
    if not table:
        return []
    max_len = max(len(k) for k in table)
    return [(s, e) for s, e, _ in _longest_match(norm_tokens(text), table, max_len)]


class RemoteLinker:
    """Client for a TagMe-style annotation service.

    Sends ``text`` and an auth token and reads ``annotations`` carrying
    ``title``, ``start``/``end`` character offsets and a ``rho`` confidence.
    Annotations under ``rho_threshold`` or naming entities unknown to ``kb``
    (when one is given) are dropped; character offsets become token offsets.
    """

    def __init__(self, endpoint: str, token_env: str = "WEBQA_LINKER_TOKEN",
                 rho_threshold: float = 0.1, kb: KnowledgeBase | None = None,
                 timeout: float = 10.0, session=None):
        self.endpoint = endpoint
        self.token_env = token_env
        self.rho_threshold = rho_threshold
        self.kb = kb
        self.timeout = timeout
        if session is None:
            import requests
            session = requests.Session()
        self.session = session

    def link(self, text: str) -> list[LinkedMention]:
        token = os.environ.get(self.token_env)
        if not token:
            raise RuntimeError(f"environment variable {self.token_env} is not set")
        resp = self.session.post(self.endpoint, data={"text": text, "gcube-token": token},
                                 timeout=self.timeout)
        resp.raise_for_status()
        annotations = resp.json().get("annotations", [])

        # character offset -> token index
        starts, ends, pos = [], [], 0
        for tok in text.split():
            pos = text.index(tok, pos)
            starts.append(pos)
            ends.append(pos + len(tok))
            pos += len(tok)

        mentions = []
        for ann in annotations:
            if float(ann.get("rho", 0.0)) < self.rho_threshold or "title" not in ann:
                continue
            entity = ann["title"].replace(" ", "_")
            if self.kb is not None and entity not in self.kb.types:
                continue
            c0, c1 = int(ann["start"]), int(ann["end"])
            toks = [i for i, (a, b) in enumerate(zip(starts, ends)) if a < c1 and b > c0]
            if not toks:
                continue
            surface = ann.get("spot", text[c0:c1]).lower()
            mentions.append(LinkedMention(entity, toks[0], toks[-1] + 1, surface))

        mentions.sort(key=lambda m: (m.start, -m.end))
        out, last_end = [], 0
        for m in mentions:
            if m.start >= last_end:
                out.append(m)
                last_end = m.end
        return out


@dataclass(frozen=True)
class CandidateAnswer:
    """A linked entity with every mention of it: ``(snippet index, mention)`` pairs."""

    entity: str
    mentions: tuple[tuple[int, LinkedMention], ...]

    def __post_init__(self):
        if not self.mentions:
            raise ValueError(f"candidate {self.entity!r} has no mentions")
        if any(m.entity != self.entity for _, m in self.mentions):
            raise ValueError(f"candidate {self.entity!r} holds a mention of another entity")

    @property
    def snippet_indices(self) -> list[int]:
        return sorted({i for i, _ in self.mentions})


def extract_candidates(snippets: Sequence[Snippet], linker: Linker, query: KbcQuery,
                       errors: list | None = None) -> list[CandidateAnswer]:
    """Group linked mentions by entity, in order of first appearance.

    The query subject is never a candidate. A snippet whose linking raises is
    skipped; ``(snippet index, exception)`` is appended to ``errors`` if given.
    """
    grouped: dict[str, list[tuple[int, LinkedMention]]] = {}
    for idx, snip in enumerate(snippets):
        try:
            mentions = linker.link(snip.text)
        except Exception as exc:
            log.warning("linking failed on snippet %d (%r): %s", idx, snip.question.text, exc)
            if errors is not None:
                errors.append((idx, exc))
            continue
        for m in mentions:
            if m.entity == query.subject:
                continue
            grouped.setdefault(m.entity, []).append((idx, m))
    return [CandidateAnswer(e, tuple(ms)) for e, ms in grouped.items()]


def split_by_type(candidates: Sequence[CandidateAnswer], kb: KnowledgeBase,
                  relation: str) -> tuple[list[CandidateAnswer], list[CandidateAnswer]]:
    """``(kept, discarded)`` by the relation's object type; order preserved."""
    wanted = kb.schema(relation).object_type
    kept, dropped = [], []
    for c in candidates:
        (kept if wanted in kb.entity_types(c.entity) else dropped).append(c)
    return kept, dropped


def type_filter(candidates: Sequence[CandidateAnswer], kb: KnowledgeBase,
                relation: str) -> list[CandidateAnswer]:
    return split_by_type(candidates, kb, relation)[0]
