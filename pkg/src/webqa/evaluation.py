"""Average precision, MAP, benchmark runs and template sweeps."""
from __future__ import annotations

import csv
import io
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .errors import DataError
from .kb import KbcQuery, KnowledgeBase
from .linking import Linker
from .questions import TemplateSet, baseline_ranking, greedy_path
from .ranking import Hyperparams, RankedAnswer
from .pipeline import Pipeline
from .snippets import DEFAULT_MAX_PER_QUESTION, SnippetSource

log = logging.getLogger(__name__)

__all__ = [
    "AP_MODES",
    "average_precision",
    "mean_average_precision",
    "pr_auc",
    "QueryEvaluation",
    "BenchmarkReport",
    "run_benchmark",
    "TemplateEvaluator",
    "SweepResult",
    "sweep_templates",
]

AP_MODES = ("standard", "paper-literal")


def average_precision(ranked: Sequence[str], truth, mode: str = "standard") -> float:
    """AP of a ranked list against a truth set.

    ``standard`` sums precision at each relevant rank and divides by ``|truth|``.
    ``paper-literal`` sums precision times the change in recall over the list
    and divides by the list length. Both give 0 for an empty truth set.
    """
    if mode not in AP_MODES:
        raise ValueError(f"unknown AP mode {mode!r}; expected one of {AP_MODES}")
    if len(set(ranked)) != len(ranked):
        dupes = sorted({e for e in ranked if list(ranked).count(e) > 1})
        raise ValueError(f"duplicate entities in ranking: {dupes}")
    truth = set(truth)
    if not truth or not ranked:
        return 0.0
    hits, total = 0, 0.0
    for k, e in enumerate(ranked, 1):
        if e in truth:
            hits += 1
            total += hits / k
    if mode == "standard":
        return total / len(truth)
    return (total / len(truth)) / len(ranked)


def pr_auc(scores: Sequence[float], labels: Sequence[int]) -> float:
    """Area under the step precision-recall curve (ties broken by input order)."""
    order = sorted(range(len(scores)), key=lambda i: -scores[i])
    truth = {i for i, y in enumerate(labels) if y}
    return average_precision(order, truth)


@dataclass
class QueryEvaluation:
    query: KbcQuery
    ranked: list[RankedAnswer]
    truth: frozenset[str]
    ap: float
    flag: str | None = None

    def to_dict(self) -> dict:
        return {
            "subject": self.query.subject,
            "relation": self.query.relation,
            "ap": self.ap,
            "flag": self.flag,
            "truth": sorted(self.truth),
            "ranked": [[r.entity, r.probability] for r in self.ranked],
        }


def mean_average_precision(evaluations: Sequence[QueryEvaluation | float]) -> float:
    if not evaluations:
        raise ValueError("MAP of an empty query set is undefined")
    aps = [e.ap if isinstance(e, QueryEvaluation) else float(e) for e in evaluations]
    return sum(aps) / len(aps)


@dataclass
class BenchmarkReport:
    relation: str
    map: float
    per_query: list[QueryEvaluation]
    config: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"relation": self.relation, "map": self.map, "config": self.config,
                "per_query": [q.to_dict() for q in self.per_query]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["relation", "query_subject", "ap", "k", "templates"])
        k = self.config.get("snippet_k")
        tpl = ";".join(self.config.get("templates", []))
        for q in self.per_query:
            w.writerow([self.relation, q.query.subject, repr(q.ap), "all" if k is None else k, tpl])
        return buf.getvalue()


def _evaluate_query(pipe: Pipeline, query: KbcQuery, templates, models, snippet_k,
                    ap_mode) -> QueryEvaluation:
    truth = pipe.kb.closed_world_objects(query.subject, query.relation)
    try:
        trace = pipe.run(query, templates, models["ranker"], models.get("filter"), snippet_k)
    except Exception as exc:
        log.warning("query %s failed: %s", query, exc)
        return QueryEvaluation(query, [], truth, 0.0, f"error: {type(exc).__name__}: {exc}")
    flag = None
    if trace.errors:
        flag = "; ".join(trace.errors)
    if not trace.ranked:
        flag = "no candidates" if flag is None else f"no candidates; {flag}"
    ap = average_precision([r.entity for r in trace.ranked], truth, ap_mode)
    return QueryEvaluation(query, trace.ranked, truth, ap, flag)


def run_benchmark(kb: KnowledgeBase, corpus: SnippetSource, relation: str,
                  templates: TemplateSet | Sequence[str], snippet_k: int | None,
                  models: dict, queries: Sequence[KbcQuery], *, linker: Linker | None = None,
                  ap_mode: str = "standard", max_per_question: int = DEFAULT_MAX_PER_QUESTION,
                  workers: int = 1, seeds: dict | None = None,
                  pipeline: Pipeline | None = None) -> BenchmarkReport:
    """Run the full pipeline on ``queries`` and score each ranking.

    ``models`` maps ``"ranker"`` (required) and ``"filter"`` (required unless
    ``snippet_k`` is None, meaning all snippets) to trained models. Queries that
    yield no candidates or fail score 0 and carry a flag.
    """
    kb.schema(relation)
    if models.get("ranker") is None:
        raise DataError(f"no ranker model for relation {relation!r}")
    if snippet_k is not None and models.get("filter") is None:
        raise DataError(f"no snippet-filter model for relation {relation!r}")
    if ap_mode not in AP_MODES:
        raise ValueError(f"unknown AP mode {ap_mode!r}")
    if not queries:
        raise ValueError("benchmark needs at least one query")
    for q in queries:
        if q.relation != relation:
            raise ValueError(f"query {q} does not belong to relation {relation!r}")

    templates = tuple(templates)
    pipe = pipeline or Pipeline(kb, corpus, linker, max_per_question)
    run_one = lambda q: _evaluate_query(pipe, q, templates, models, snippet_k, ap_mode)  # noqa: E731
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            per_query = list(pool.map(run_one, queries))
    else:
        per_query = [run_one(q) for q in queries]
    config = {"templates": list(templates), "snippet_k": snippet_k, "ap_mode": ap_mode,
              "max_per_question": max_per_question, "n_queries": len(queries),
              "seeds": dict(seeds or {})}
    return BenchmarkReport(relation, mean_average_precision(per_query), per_query, config)


class TemplateEvaluator:
    """MAP of a template set: train a ranker on ``train_queries`` with those
    templates, then benchmark it on ``eval_queries`` using all snippets.

    Results are memoized on the set of keywords; a set whose training data
    lacks a class scores 0.
    """

    def __init__(self, pipeline: Pipeline, train_queries: Sequence[KbcQuery],
                 eval_queries: Sequence[KbcQuery] | None = None, seed: int = 0,
                 hyperparams: Hyperparams | None = None, ap_mode: str = "standard"):
        self.pipeline = pipeline
        self.train_queries = list(train_queries)
        self.eval_queries = list(eval_queries) if eval_queries is not None else self.train_queries
        self.seed = seed
        self.hyperparams = hyperparams
        self.ap_mode = ap_mode
        self.cache: dict[frozenset[str], float] = {}
        self.calls = 0

    def __call__(self, templates: Sequence[str]) -> float:
        self.calls += 1
        key = frozenset(templates)
        if key not in self.cache:
            self.cache[key] = self._score(tuple(sorted(key)))
        return self.cache[key]

    def _score(self, templates: tuple[str, ...]) -> float:
        try:
            ranker = self.pipeline.train_ranker(self.train_queries, templates, self.seed,
                                                self.hyperparams)
        except DataError as exc:
            log.info("templates %s: %s", templates, exc)
            return 0.0
        relation = self.eval_queries[0].relation
        report = run_benchmark(self.pipeline.kb, self.pipeline.source, relation, templates, None,
                               {"ranker": ranker}, self.eval_queries, ap_mode=self.ap_mode,
                               pipeline=self.pipeline)
        return report.map


@dataclass
class SweepResult:
    relation: str
    greedy: list[TemplateSet]
    baseline: list[TemplateSet]

    @staticmethod
    def _best(sets: Sequence[TemplateSet]) -> TemplateSet:
        return min(sets, key=lambda s: (-s.performance, len(s)))

    @property
    def greedy_best(self) -> TemplateSet:
        return self._best(self.greedy)

    @property
    def baseline_best(self) -> TemplateSet:
        return self._best(self.baseline)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["set_size", "algorithm", "map"])
        for name, sets in (("greedy", self.greedy), ("baseline", self.baseline)):
            for s in sets:
                w.writerow([len(s), name, repr(s.performance)])
        return buf.getvalue()


def sweep_templates(kb: KnowledgeBase, corpus: SnippetSource, relation: str,
                    candidates: Sequence[str], queries: Sequence[KbcQuery], *,
                    eval_queries: Sequence[KbcQuery] | None = None, seed: int = 0,
                    linker: Linker | None = None, ap_mode: str = "standard",
                    max_per_question: int = DEFAULT_MAX_PER_QUESTION,
                    evaluate: Callable[[Sequence[str]], float] | None = None,
                    workers: int = 1) -> SweepResult:
    """MAP curves of the greedy path and of the individually-ranked top-k sets.

    ``queries`` train each set's ranker; MAP is measured on ``eval_queries``
    (default: the same queries).
    """
    kb.schema(relation)
    if evaluate is None:
        pipe = Pipeline(kb, corpus, linker, max_per_question, workers=workers)
        evaluate = TemplateEvaluator(pipe, queries, eval_queries, seed, ap_mode=ap_mode)
    greedy = [TemplateSet(s.templates, s.performance, relation)
              for s in greedy_path(candidates, evaluate)]
    order = [t for t, _ in baseline_ranking(candidates, lambda t: evaluate((t,)))]
    baseline = [TemplateSet(tuple(order[:k]), float(evaluate(tuple(order[:k]))), relation)
                for k in range(1, len(order) + 1)]
    return SweepResult(relation, greedy, baseline)
