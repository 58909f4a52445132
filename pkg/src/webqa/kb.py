"""Local Yago-style knowledge base: facts, types, labels, schemas.

All files are UTF-8 TSV; lines starting with ``#`` and blank lines are skipped.

    facts.tsv    subject  relation  object
    types.tsv    entity   type
    labels.tsv   surface form  entity
    schemas.tsv  relation  subject_type  object_type  template1,template2,...
"""
from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Iterator

from .errors import DataError, UnknownRelationError

__all__ = [
    "Fact",
    "RelationSchema",
    "KbcQuery",
    "KnowledgeBase",
    "load_kb",
    "entity_types",
    "relatedness",
    "closed_world_objects",
    "sample_queries",
    "canonical_label",
]


@dataclass(frozen=True, order=True)
class Fact:
    subject: str
    relation: str
    object: str

    def __post_init__(self):
        if not (self.subject and self.relation and self.object):
            raise DataError(f"fact fields must be non-empty: {self!r}")


@dataclass(frozen=True)
class RelationSchema:
    relation: str
    subject_type: str
    object_type: str
    templates: tuple[str, ...]

    def __post_init__(self):
        if not self.templates:
            raise DataError(f"schema for {self.relation!r} lists no templates")


@dataclass(frozen=True, order=True)
class KbcQuery:
    """A completion query ``<subject, relation, ?>``."""

    subject: str
    relation: str


def canonical_label(entity: str) -> str:
    """``"New_York_City"`` -> ``"new york city"``."""
    return " ".join(entity.replace("_", " ").split()).lower()


@dataclass
class KnowledgeBase:
    facts: frozenset[Fact] = frozenset()
    types: dict[str, frozenset[str]] = field(default_factory=dict)
    labels: dict[str, frozenset[str]] = field(default_factory=dict)
    schemas: dict[str, RelationSchema] = field(default_factory=dict)
    link_sets: dict[str, frozenset[str]] = field(default_factory=dict)
    relatedness_fn: Callable[[str, str], float] | None = None

    def __post_init__(self):
        objects = defaultdict(set)
        degree = defaultdict(int)
        for f in self.facts:
            objects[(f.subject, f.relation)].add(f.object)
            degree[f.subject] += 1
            if f.object != f.subject:
                degree[f.object] += 1
        self._objects = {k: frozenset(v) for k, v in objects.items()}
        self._fact_count = dict(degree)
        forms = defaultdict(set)
        for label, ents in self.labels.items():
            for e in ents:
                forms[e].add(label)
        self._surface_forms = {e: frozenset(v) for e, v in forms.items()}

    @classmethod
    def from_records(cls, facts: Iterable[Fact], types: dict[str, Iterable[str]],
                     labels: dict[str, Iterable[str]] | None = None,
                     schemas: Iterable[RelationSchema] = ()) -> "KnowledgeBase":
        """Build a validated KB from in-memory records.

        Entities listed in ``types`` receive their canonical name as a label;
        ``link_sets`` are derived from ``facts``.
        """
        facts = frozenset(facts)
        types_ = {e: frozenset(ts) for e, ts in types.items()}
        missing = sorted({x for f in facts for x in (f.subject, f.object)} - types_.keys())
        if missing:
            raise DataError(f"entities in facts missing from types: {', '.join(missing)}")

        lab: dict[str, set[str]] = defaultdict(set)
        for surface, ents in (labels or {}).items():
            key = " ".join(surface.split()).lower()
            for e in ents:
                if e not in types_:
                    raise DataError(f"label {surface!r} points to unknown entity {e!r}")
                lab[key].add(e)
        for e in types_:
            lab[canonical_label(e)].add(e)

        known_types = set().union(*types_.values()) if types_ else set()
        schema_map = {}
        for s in schemas:
            if s.object_type not in known_types:
                raise DataError(f"schema {s.relation!r}: object type {s.object_type!r} "
                                "not present in the type store")
            schema_map[s.relation] = s

        links: dict[str, set[str]] = defaultdict(set)
        for f in facts:
            if f.subject != f.object:
                links[f.subject].add(f.object)
                links[f.object].add(f.subject)
        return cls(
            facts=facts,
            types=types_,
            labels={k: frozenset(v) for k, v in lab.items()},
            schemas=schema_map,
            link_sets={e: frozenset(v) for e, v in links.items()},
        )

    @property
    def entities(self) -> frozenset[str]:
        return frozenset(self.types)

    def schema(self, relation: str) -> RelationSchema:
        try:
            return self.schemas[relation]
        except KeyError:
            raise UnknownRelationError(relation) from None

    def entity_types(self, e: str) -> frozenset[str]:
        return self.types.get(e, frozenset())

    def fact_count(self, e: str) -> int:
        return self._fact_count.get(e, 0)

    def surface_forms(self, e: str) -> frozenset[str]:
        """Lowercased labels that name ``e`` (always includes the canonical one)."""
        return self._surface_forms.get(e, frozenset())

    def relatedness(self, a: str, b: str) -> float:
        if self.relatedness_fn is not None:
            return self.relatedness_fn(a, b)
        return jaccard_relatedness(self, a, b)

    def closed_world_objects(self, subject: str, relation: str) -> frozenset[str]:
        self.schema(relation)
        return self._objects.get((subject, relation), frozenset())

    def subjects_with_objects(self, relation: str) -> list[str]:
        return sorted(s for (s, r) in self._objects if r == relation)

    def iter_facts(self) -> Iterator[Fact]:
        return iter(sorted(self.facts))

    def write_facts(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for f in self.iter_facts():
                fh.write(f"{f.subject}\t{f.relation}\t{f.object}\n")


def jaccard_relatedness(kb: KnowledgeBase, a: str, b: str) -> float:
    if a not in kb.types or b not in kb.types:
        return 0.0
    if a == b:
        return 1.0
    la = kb.link_sets.get(a, frozenset())
    lb = kb.link_sets.get(b, frozenset())
    union = len(la | lb)
    if union == 0:
        return 0.0
    return len(la & lb) / union


def entity_types(kb: KnowledgeBase, e: str) -> frozenset[str]:
    return kb.entity_types(e)


def relatedness(kb: KnowledgeBase, a: str, b: str) -> float:
    return kb.relatedness(a, b)


def closed_world_objects(kb: KnowledgeBase, subject: str, relation: str) -> frozenset[str]:
    """Objects of ``(subject, relation)``, taken as the complete ground truth."""
    return kb.closed_world_objects(subject, relation)


def sample_queries(kb: KnowledgeBase, relation: str, n_train: int, n_test: int,
                   seed: int) -> tuple[list[KbcQuery], list[KbcQuery]]:
    """Draw disjoint train/test query lists from subjects that have ground truth."""
    kb.schema(relation)
    if n_train < 0 or n_test < 0:
        raise ValueError("sample sizes must be non-negative")
    subjects = kb.subjects_with_objects(relation)
    need = n_train + n_test
    if need > len(subjects):
        raise DataError(f"relation {relation!r}: {need} queries requested but only "
                        f"{len(subjects)} subjects have ground-truth objects")
    picked = random.Random(seed).sample(subjects, need)
    queries = [KbcQuery(s, relation) for s in picked]
    return queries[:n_train], queries[n_train:]


def _read_rows(path, arity: int) -> Iterator[tuple[int, list[str]]]:
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.rstrip("\r\n")
            if not line.strip() or line.startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) != arity or not all(c.strip() for c in cols):
                raise DataError(f"{path}:{lineno}: expected {arity} tab-separated "
                                f"non-empty fields, got {line!r}")
            yield lineno, [c.strip() for c in cols]


def load_kb(facts_path, types_path, labels_path=None, schemas_path=None) -> KnowledgeBase:
    facts = [Fact(*cols) for _, cols in _read_rows(facts_path, 3)]
    types: dict[str, set[str]] = defaultdict(set)
    for _, (e, t) in _read_rows(types_path, 2):
        types[e].add(t)
    labels: dict[str, set[str]] = defaultdict(set)
    if labels_path is not None:
        for _, (surface, e) in _read_rows(labels_path, 2):
            labels[surface].add(e)
    schemas = []
    if schemas_path is not None:
        for _, (rel, st, ot, tpl) in _read_rows(schemas_path, 4):
            templates = tuple(t.strip() for t in tpl.split(",") if t.strip())
            schemas.append(RelationSchema(rel, st, ot, templates))
    return KnowledgeBase.from_records(facts, types, labels, schemas)
