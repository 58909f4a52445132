"""Keyword questions from KBC queries, and per-relation template selection."""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Sequence

from .kb import KbcQuery

__all__ = [
    "Question",
    "TemplateSet",
    "check_template",
    "generate_questions",
    "greedy_path",
    "greedy_select_templates",
    "baseline_ranking",
    "baseline_select_topk",
    "load_template_set",
]

SetEvaluator = Callable[[tuple[str, ...]], float]


def check_template(keyword: str) -> str:
    if not isinstance(keyword, str) or not keyword or any(c.isspace() for c in keyword):
        raise ValueError(f"template keyword must be one non-empty word, got {keyword!r}")
    return keyword


@dataclass(frozen=True)
class Question:
    text: str
    template: str
    query: KbcQuery

    @property
    def subject_name(self) -> str:
        return self.query.subject.replace("_", " ")


@dataclass(frozen=True)
class TemplateSet:
    templates: tuple[str, ...]
    performance: float = 0.0
    relation: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "templates", tuple(self.templates))
        for t in self.templates:
            check_template(t)
        if len(set(self.templates)) != len(self.templates):
            raise ValueError(f"duplicate templates in {self.templates}")

    def __len__(self):
        return len(self.templates)

    def __iter__(self):
        return iter(self.templates)

    def to_json(self) -> str:
        return json.dumps({"relation": self.relation, "templates": list(self.templates),
                           "performance": self.performance}, indent=2) + "\n"

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_json())


def load_template_set(path) -> TemplateSet:
    with open(path, encoding="utf-8") as fh:
        d = json.load(fh)
    return TemplateSet(tuple(d["templates"]), float(d.get("performance", 0.0)), d.get("relation"))


def generate_questions(query: KbcQuery, templates: Sequence[str] | TemplateSet) -> list[Question]:
    """One question per template: the subject's name followed by the keyword.

    >>> q = KbcQuery("Marvin_Minsky", "wasBornIn")
    >>> [x.text for x in generate_questions(q, ["born", "birth"])]
    ['Marvin Minsky born', 'Marvin Minsky birth']
    """
    templates = tuple(templates)
    if not templates:
        raise ValueError("no templates given")
    name = query.subject.replace("_", " ")
    return [Question(f"{name} {check_template(t)}", t, query) for t in templates]


def greedy_path(candidates: Sequence[str], evaluate: SetEvaluator) -> list[TemplateSet]:
    """Grow a template set one keyword at a time, recording every intermediate set.

    At each step the remaining keyword ``t`` maximizing ``evaluate(Q + (t,))`` is
    appended; equal scores go to the lexicographically smaller keyword. ``evaluate``
    is called n + (n-1) + ... + 1 times and receives templates in selection order.
    """
    remaining = [check_template(t) for t in candidates]
    if not remaining:
        raise ValueError("greedy selection needs at least one candidate template")
    if len(set(remaining)) != len(remaining):
        raise ValueError("duplicate candidate templates")
    remaining.sort()

    chosen: tuple[str, ...] = ()
    path = []
    while remaining:
        best_t, best_score = None, None
        for t in remaining:
            score = float(evaluate(chosen + (t,)))
            if best_score is None or score > best_score:
                best_t, best_score = t, score
        chosen += (best_t,)
        remaining.remove(best_t)
        path.append(TemplateSet(chosen, best_score))
    return path


def _best_of(sets: Sequence[TemplateSet]) -> TemplateSet:
    # highest performance, then smallest size
    return min(sets, key=lambda s: (-s.performance, len(s)))


def greedy_select_templates(candidates: Sequence[str], evaluate: SetEvaluator,
                            relation: str | None = None) -> TemplateSet:
    best = _best_of(greedy_path(candidates, evaluate))
    return TemplateSet(best.templates, best.performance, relation)


def baseline_ranking(candidates: Sequence[str],
                     evaluate_single: Callable[[str], float]) -> list[tuple[str, float]]:
    """Templates with their individual scores, best first (ties by keyword)."""
    scored = [(check_template(t), float(evaluate_single(t))) for t in candidates]
    return sorted(scored, key=lambda ts: (-ts[1], ts[0]))


def baseline_select_topk(candidates: Sequence[str], evaluate_single: Callable[[str], float],
                         k: int, relation: str | None = None,
                         evaluate: SetEvaluator | None = None) -> TemplateSet:
    """The ``k`` individually best templates, ranked independently of each other.

    ``performance`` is filled from ``evaluate`` when it is given, else left at 0.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if k > len(candidates):
        raise ValueError(f"k={k} exceeds the {len(candidates)} candidates")
    chosen = tuple(t for t, _ in baseline_ranking(candidates, evaluate_single)[:k])
    perf = float(evaluate(chosen)) if evaluate is not None else 0.0
    return TemplateSet(chosen, perf, relation)
