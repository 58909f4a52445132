"""Query-driven snippet filtering: rerank snippets by classifier confidence, keep top k."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from .errors import DataError
from .linking import Linker
from .ranking import Hyperparams, LabeledExample, LogisticModel, resample_balanced, train_logistic
from .snippets import Snippet
from .text import contains_word

__all__ = [
    "SNIPPET_FEATURES",
    "SnippetFeatures",
    "extract_snippet_features",
    "snippet_vectors",
    "label_snippet",
    "train_filter",
    "filter_snippets",
]

SNIPPET_FEATURES = ("rank", "has_template_keyword", "subject_word_hits")


@dataclass(frozen=True)
class SnippetFeatures:
    original_rank: int
    has_template_keyword: int
    subject_word_hits: int

    def __iter__(self):
        return iter((self.original_rank, self.has_template_keyword, self.subject_word_hits))


def _subject_words(snippet: Snippet) -> list[str]:
    # distinct, case-insensitively
    seen, out = set(), []
    for w in snippet.question.query.subject.split("_"):
        if w and w.lower() not in seen:
            seen.add(w.lower())
            out.append(w)
    return out


def extract_snippet_features(snippet: Snippet) -> SnippetFeatures:
    text = snippet.text
    kw = int(contains_word(text, snippet.question.template))
    hits = sum(contains_word(text, w) for w in _subject_words(snippet))
    return SnippetFeatures(snippet.rank, kw, hits)


def snippet_vectors(snippets: Sequence[Snippet]) -> list[tuple[float, float, float]]:
    """Classifier inputs; rank is rescaled to [0, 1] by its question's result count."""
    per_question = Counter(s.question.text for s in snippets)
    out = []
    for s in snippets:
        f = extract_snippet_features(s)
        n = max(per_question[s.question.text], f.original_rank)
        rank = (f.original_rank - 1) / (n - 1) if n > 1 else 0.0
        out.append((rank, float(f.has_template_keyword), float(f.subject_word_hits)))
    return out


def label_snippet(snippet: Snippet, truth, linker: Linker) -> int:
    """1 iff the linker finds a ground-truth entity in the snippet."""
    if not truth:
        return 0
    return int(any(m.entity in truth for m in linker.link(snippet.text)))


def train_filter(examples: Sequence[tuple[Sequence[float], int]],
                 hyperparams: Hyperparams | None = None, seed: int = 0) -> LogisticModel:
    """Balance ``(feature vector, label)`` pairs and fit the shared logistic trainer."""
    labeled = [LabeledExample(tuple(x), int(y), (i,)) for i, (x, y) in enumerate(examples)]
    if len({e.label for e in labeled}) < 2:
        raise DataError(f"snippet filter needs both classes; got {len(labeled)} examples "
                        f"with labels {sorted({e.label for e in labeled})}")
    return train_logistic(resample_balanced(labeled, seed), hyperparams, seed,
                          feature_names=SNIPPET_FEATURES)


def filter_snippets(model: LogisticModel, snippets: Sequence[Snippet], k: int | None) -> list[Snippet]:
    """Top ``k`` snippets by model confidence (``k=None`` keeps all, reranked).

    Ties keep the lower original rank first, then input order, which is
    question order for pipeline-fetched lists.
    """
    if k is not None and k < 1:
        raise ValueError("k must be >= 1")
    if not snippets:
        return []
    probs = model.predict_many(snippet_vectors(snippets))
    order = sorted(range(len(snippets)), key=lambda i: (-probs[i], snippets[i].rank, i))
    if k is not None:
        order = order[:k]
    return [snippets[i] for i in order]
