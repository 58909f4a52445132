"""Snippet retrieval: an offline JSONL corpus and a rate-limited HTTP adapter."""
from __future__ import annotations

import json
import os
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Protocol, Sequence

from .errors import FetchError
from .questions import Question

__all__ = [
    "Snippet",
    "SnippetSource",
    "FixtureCorpus",
    "HttpSearchSource",
    "fetch_snippets",
    "fetch_all",
    "normalize_question",
    "DEFAULT_MAX_PER_QUESTION",
]

DEFAULT_MAX_PER_QUESTION = 50


@dataclass(frozen=True)
class Snippet:
    text: str
    rank: int
    question: Question

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError(f"snippet rank must be >= 1, got {self.rank}")


class SnippetSource(Protocol):
    def fetch(self, question: str, max_results: int) -> list[str]:
        """Ranked snippet texts for ``question``, at most ``max_results`` of them."""


def normalize_question(text: str) -> str:
    return " ".join(text.split())


class FixtureCorpus:
    """Question text -> ordered snippet texts, read from JSON Lines.

    Each line is ``{"question": ..., "snippets": [...]}``. Repeated questions
    append to the earlier entry.
    """

    def __init__(self, entries: dict[str, Sequence[str]] | None = None):
        self._entries: dict[str, tuple[str, ...]] = {}
        for q, snips in (entries or {}).items():
            key = normalize_question(q)
            self._entries[key] = self._entries.get(key, ()) + tuple(snips)

    @classmethod
    def load(cls, path) -> "FixtureCorpus":
        entries: dict[str, list[str]] = {}
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                if not line.strip():
                    continue
                try:
                    row = json.loads(line)
                    q, snips = row["question"], row["snippets"]
                except (json.JSONDecodeError, KeyError, TypeError) as exc:
                    raise ValueError(f"{path}:{lineno}: bad corpus line ({exc})") from None
                if not isinstance(snips, list) or not all(isinstance(s, str) for s in snips):
                    raise ValueError(f"{path}:{lineno}: 'snippets' must be a list of strings")
                entries.setdefault(normalize_question(q), []).extend(snips)
        return cls(entries)

    def __len__(self):
        return len(self._entries)

    def __contains__(self, question):
        return normalize_question(question) in self._entries

    def questions(self) -> list[str]:
        return list(self._entries)

    def fetch(self, question: str, max_results: int) -> list[str]:
        return list(self._entries.get(normalize_question(question), ())[:max_results])

    def dump(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for q, snips in self._entries.items():
                fh.write(json.dumps({"question": q, "snippets": list(snips)},
                                    ensure_ascii=False) + "\n")


class HttpSearchSource:
    """Search-engine adapter over a JSON HTTP API.

    Understands Google Custom Search style responses (``items[].snippet``) and
    SerpAPI style ones (``organic_results[].snippet``). Pages are requested in
    chunks of ``page_size`` with a 1-based ``start`` offset. Requests are spaced
    so that at most ``rate_limit`` go out per second across all threads.
    """

    def __init__(self, endpoint: str, api_key_env: str = "WEBQA_SEARCH_API_KEY",
                 rate_limit: float = 5.0, page_size: int = 10, timeout: float = 10.0,
                 extra_params: dict | None = None, session=None):
        self.endpoint = endpoint
        self.api_key_env = api_key_env
        self.rate_limit = rate_limit
        self.page_size = page_size
        self.timeout = timeout
        self.extra_params = dict(extra_params or {})
        if session is None:
            import requests
            session = requests.Session()
        self.session = session
        self._lock = threading.Lock()
        self._next_slot = 0.0

    def _wait_turn(self):
        if self.rate_limit <= 0:
            return
        with self._lock:
            now = time.monotonic()
            slot = max(now, self._next_slot)
            self._next_slot = slot + 1.0 / self.rate_limit
        if slot > now:
            time.sleep(slot - now)

    def fetch(self, question: str, max_results: int) -> list[str]:
        key = os.environ.get(self.api_key_env)
        if not key:
            raise RuntimeError(f"environment variable {self.api_key_env} is not set")
        out: list[str] = []
        start = 1
        while len(out) < max_results:
            num = min(self.page_size, max_results - len(out))
            params = {**self.extra_params, "q": question, "key": key, "num": num, "start": start}
            self._wait_turn()
            resp = self.session.get(self.endpoint, params=params, timeout=self.timeout)
            resp.raise_for_status()
            data = resp.json()
            items = data.get("items") or data.get("organic_results") or []
            texts = [it.get("snippet", "") for it in items if it.get("snippet")]
            if not texts:
                break
            out.extend(texts)
            if len(items) < num:
                break
            start += len(items)
        return out[:max_results]


def fetch_snippets(source: SnippetSource, question: Question,
                   max_per_question: int = DEFAULT_MAX_PER_QUESTION) -> list[Snippet]:
    if max_per_question < 1:
        raise ValueError("max_per_question must be >= 1")
    try:
        texts = source.fetch(question.text, max_per_question)
    except Exception as exc:
        raise FetchError(question.text, f"{type(exc).__name__}: {exc}") from exc
    return [Snippet(t, i, question) for i, t in enumerate(texts[:max_per_question], 1)]


def fetch_all(source: SnippetSource, questions: Sequence[Question],
              max_per_question: int = DEFAULT_MAX_PER_QUESTION,
              workers: int = 1) -> tuple[list[Snippet], list[FetchError]]:
    """Fetch every question, possibly concurrently.

    Output is ordered by (question index, rank) whatever the scheduling. Failed
    questions contribute nothing to the snippets and one entry to the errors.
    """
    def one(q):
        try:
            return fetch_snippets(source, q, max_per_question), None
        except FetchError as err:
            return [], err

    if workers > 1 and len(questions) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, questions))
    else:
        results = [one(q) for q in questions]

    snippets, errors = [], []
    for snips, err in results:
        snippets.extend(snips)
        if err is not None:
            errors.append(err)
    return snippets, errors
