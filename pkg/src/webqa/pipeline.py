"""End-to-end answering: questions -> snippets -> filter -> link -> type filter -> rank."""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Sequence

from .errors import DataError
from .kb import KbcQuery, KnowledgeBase
from .linking import CandidateAnswer, DictionaryLinker, Linker, extract_candidates, split_by_type
from .questions import generate_questions
from .ranking import (ANSWER_FEATURES, DEFAULT_MAX_DISTANCE, AnswerFeatures, Hyperparams,
                      LabeledExample, LogisticModel, RankedAnswer, extract_answer_features,
                      rank_answers, resample_balanced, train_logistic)
from .snippet_filter import filter_snippets, snippet_vectors, train_filter
from .snippets import DEFAULT_MAX_PER_QUESTION, Snippet, SnippetSource, fetch_all

log = logging.getLogger(__name__)

__all__ = ["Pipeline", "QueryTrace", "TrainingSummary"]


@dataclass
class QueryTrace:
    """Everything the pipeline produced for one query."""

    query: KbcQuery
    snippets: list[Snippet] = field(default_factory=list)
    kept_snippets: list[Snippet] = field(default_factory=list)
    raw_candidates: list[CandidateAnswer] = field(default_factory=list)
    discarded: list[CandidateAnswer] = field(default_factory=list)
    features: list[tuple[CandidateAnswer, AnswerFeatures]] = field(default_factory=list)
    ranked: list[RankedAnswer] = field(default_factory=list)
    errors: list[str] = field(default_factory=list)
    timings: dict[str, float] = field(default_factory=dict)


@dataclass
class TrainingSummary:
    filter_counts: tuple[int, int]
    filter_balanced: tuple[int, int]
    filter_loss: float
    ranker_counts: tuple[int, int]
    ranker_balanced: tuple[int, int]
    ranker_loss: float

    def lines(self) -> list[str]:
        return [
            f"filter: {self.filter_counts[1]} pos / {self.filter_counts[0]} neg -> "
            f"{self.filter_balanced[1]} / {self.filter_balanced[0]} after resampling, "
            f"final loss {self.filter_loss:.6f}",
            f"ranker: {self.ranker_counts[1]} pos / {self.ranker_counts[0]} neg -> "
            f"{self.ranker_balanced[1]} / {self.ranker_balanced[0]} after resampling, "
            f"final loss {self.ranker_loss:.6f}",
        ]


def _counts(labels) -> tuple[int, int]:
    labels = list(labels)
    return labels.count(0), labels.count(1)


@dataclass
class Pipeline:
    kb: KnowledgeBase
    source: SnippetSource
    linker: Linker | None = None
    max_per_question: int = DEFAULT_MAX_PER_QUESTION
    max_distance: float = DEFAULT_MAX_DISTANCE
    workers: int = 1

    def __post_init__(self):
        if self.linker is None:
            self.linker = DictionaryLinker(self.kb)

    def collect(self, query: KbcQuery, templates: Sequence[str]) -> tuple[list[Snippet], list]:
        questions = generate_questions(query, templates)
        return fetch_all(self.source, questions, self.max_per_question, self.workers)

    def run(self, query: KbcQuery, templates: Sequence[str], ranker: LogisticModel | None = None,
            filter_model: LogisticModel | None = None, k: int | None = None) -> QueryTrace:
        """Run one query; ``k=None`` skips snippet filtering, ``ranker=None`` stops before ranking."""
        self.kb.schema(query.relation)
        trace = QueryTrace(query)
        clock = time.perf_counter()

        def lap(stage):
            nonlocal clock
            now = time.perf_counter()
            trace.timings[stage] = now - clock
            clock = now

        trace.snippets, fetch_errors = self.collect(query, templates)
        trace.errors.extend(str(e) for e in fetch_errors)
        lap("collect")
        if k is not None:
            if filter_model is None:
                raise DataError("snippet filtering requested without a filter model")
            trace.kept_snippets = filter_snippets(filter_model, trace.snippets, k)
        else:
            trace.kept_snippets = list(trace.snippets)
        lap("filter")
        link_errors: list = []
        trace.raw_candidates = extract_candidates(trace.kept_snippets, self.linker, query,
                                                  link_errors)
        trace.errors.extend(f"linking snippet {i}: {e}" for i, e in link_errors)
        kept, trace.discarded = split_by_type(trace.raw_candidates, self.kb, query.relation)
        lap("link")
        trace.features = [(c, extract_answer_features(c, trace.kept_snippets, query, self.kb,
                                                      self.max_distance)) for c in kept]
        if ranker is not None:
            trace.ranked = rank_answers(ranker, trace.features)
        lap("rank")
        return trace

    def ranker_examples(self, queries: Sequence[KbcQuery],
                        templates: Sequence[str]) -> list[LabeledExample]:
        """Typed candidates of each query, positive iff in the closed-world truth."""
        out = []
        for q in queries:
            truth = self.kb.closed_world_objects(q.subject, q.relation)
            for c, f in self.run(q, templates).features:
                out.append(LabeledExample(f.as_vector(), int(c.entity in truth),
                                          (q.subject, q.relation, c.entity)))
        return out

    def filter_examples(self, queries: Sequence[KbcQuery],
                        templates: Sequence[str]) -> list[tuple[tuple[float, ...], int]]:
        out = []
        for q in queries:
            truth = self.kb.closed_world_objects(q.subject, q.relation)
            snippets, _ = self.collect(q, templates)
            for s, x in zip(snippets, snippet_vectors(snippets)):
                hit = any(m.entity in truth for m in self.linker.link(s.text))
                out.append((x, int(hit)))
        return out

    def train_ranker(self, queries: Sequence[KbcQuery], templates: Sequence[str], seed: int,
                     hyperparams: Hyperparams | None = None) -> LogisticModel:
        examples = self.ranker_examples(queries, templates)
        return train_logistic(resample_balanced(examples, seed), hyperparams, seed,
                              feature_names=ANSWER_FEATURES)

    def train(self, queries: Sequence[KbcQuery], templates: Sequence[str], seed: int,
              hyperparams: Hyperparams | None = None,
              ) -> tuple[LogisticModel, LogisticModel, TrainingSummary]:
        """Train the snippet filter and the answer ranker on ``queries``."""
        f_examples = self.filter_examples(queries, templates)
        f_labels = [y for _, y in f_examples]
        filter_model = train_filter(f_examples, hyperparams, seed)
        r_examples = self.ranker_examples(queries, templates)
        if len({e.label for e in r_examples}) < 2:
            raise DataError(f"ranker needs both classes; got {_counts(e.label for e in r_examples)} "
                            "(neg, pos) candidate examples")
        balanced = resample_balanced(r_examples, seed)
        ranker = train_logistic(balanced, hyperparams, seed, feature_names=ANSWER_FEATURES)
        f_bal = max(_counts(f_labels))
        summary = TrainingSummary(
            _counts(f_labels), (f_bal, f_bal), filter_model.loss_history[-1],
            _counts(e.label for e in r_examples), _counts(e.label for e in balanced),
            ranker.loss_history[-1])
        return filter_model, ranker, summary
