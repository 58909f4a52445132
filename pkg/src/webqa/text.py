"""Whitespace tokenization and word matching used by linking and features."""
from __future__ import annotations

import re
import string
from functools import lru_cache

_EDGE = string.punctuation + "‘’“”–—…"


def tokens(text: str) -> list[str]:
    return text.split()


def norm_token(tok: str) -> str:
    """Lowercase and strip leading/trailing punctuation: ``"City,"`` -> ``"city"``."""
    return tok.strip(_EDGE).lower()


def norm_tokens(text: str) -> list[str]:
    return [norm_token(t) for t in text.split()]


def norm_phrase(phrase: str) -> tuple[str, ...]:
    return tuple(t for t in norm_tokens(phrase) if t)


@lru_cache(maxsize=4096)
def _word_re(word: str) -> re.Pattern:
    return re.compile(r"(?<!\w)" + re.escape(word) + r"(?!\w)", re.IGNORECASE)


def contains_word(text: str, word: str) -> bool:
    """Case-insensitive whole-word match; adjacent punctuation is allowed."""
    return bool(word) and _word_re(word).search(text) is not None


def gap(a: tuple[int, int], b: tuple[int, int]) -> int:
    """Tokens strictly between two half-open spans; 0 if they touch or overlap."""
    if a[1] <= b[0]:
        return b[0] - a[1]
    if b[1] <= a[0]:
        return a[0] - b[1]
    return 0
